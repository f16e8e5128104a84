"""
Command-line entry point.

::

    cobeam run CONFIG [--seed N] [--trials N] [--out PATH] [--format csv|json] [--workers N]
    cobeam sweep-dof CONFIG [--lo DB] [--hi DB] [...same overrides]
    cobeam pareto CONFIG [--seed N] [--out PATH] [--format csv|json]
    cobeam verify-golden [ROOT]

Exit status is 0 on success, 1 when a golden check fails, 2 for config or
usage errors and 3 for I/O errors.

The ``pareto`` config is a YAML document with one ``pareto`` section::

    pareto:
      n_tx: 3          # antennas at each transmitter
      rho: 10.0        # linear SNR P / sigma^2
      seed: 7          # draws h11, h12, h21, h22 from CN(0, I)
      n_points: 64
      # or explicit channels as complex strings, e.g. h11: ["1+0.5j", "0.2-1j"]
"""

import argparse
import csv
import io
import json
import os
import sys

import numpy as np
import yaml

from .exceptions import ConfigError
from .golden import verify_all
from .harness.config import FORMATS, load_config
from .harness.experiment import dof_slope, run_experiment
from .harness.export import export_results, results_to_csv, results_to_json
from .pareto import MisoScenario, random_miso_scenario, solve_boundary

__all__ = ["main", "build_parser", "load_pareto_scenario", "pareto_rows"]

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
PARETO_HEADER = ("zeta1", "zeta2", "gamma1", "gamma2", "rate1", "rate2")


def build_parser():
    parser = argparse.ArgumentParser(prog="cobeam", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def overrides(p, trials=True):
        p.add_argument("config", help="YAML config file")
        p.add_argument("--seed", type=int, help="override the base seed")
        p.add_argument("--out", help="output path (default: config value or stdout)")
        p.add_argument("--format", choices=FORMATS, help="output format")
        if trials:
            p.add_argument("--trials", type=int, help="override n_trials")
            p.add_argument("--workers", type=int, help="parallel trial workers")

    overrides(sub.add_parser("run", help="run a Monte Carlo sweep"))
    dof = sub.add_parser("sweep-dof", help="run a sweep and report per-decade slopes")
    overrides(dof)
    dof.add_argument("--lo", type=float, help="lower SNR (dB) of the slope window")
    dof.add_argument("--hi", type=float, help="upper SNR (dB) of the slope window")
    overrides(sub.add_parser("pareto", help="solve a 2-link MISO Pareto boundary"), trials=False)
    gold = sub.add_parser("verify-golden", help="replay checked-in golden experiments")
    gold.add_argument("root", nargs="?", default="golden", help="golden directory")
    return parser


def _experiment_config(args):
    config = load_config(args.config)
    changes = {}
    if args.seed is not None:
        changes["base_seed"] = args.seed
    if args.trials is not None:
        changes["n_trials"] = args.trials
    if args.workers is not None:
        changes["workers"] = args.workers
    if args.format is not None:
        changes["output_format"] = args.format
    if args.out is not None:
        changes["output_path"] = args.out
    return config.replace(**changes) if changes else config


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {path}", file=sys.stderr)


def _cmd_run(args):
    config = _experiment_config(args)
    sweep = run_experiment(config)
    if config.output_path is None:
        fmt = config.output_format
        _emit(results_to_csv(sweep) if fmt == "csv" else results_to_json(sweep), None)
    else:
        export_results(sweep, config.output_format, config.output_path)
        print(f"wrote {config.output_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep_dof(args):
    config = _experiment_config(args)
    lo, hi = config.dof_range_db or (min(config.snr_sweep_db), max(config.snr_sweep_db))
    lo = lo if args.lo is None else args.lo
    hi = hi if args.hi is None else args.hi
    sweep = run_experiment(config)
    try:
        slopes = {a: dof_slope(sweep, a, lo, hi) for a in config.algorithms}
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if config.output_format == "json":
        text = json.dumps(
            {"snr_lo_db": lo, "snr_hi_db": hi, "slopes": slopes, "config": config.to_dict()},
            indent=2,
        ) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("algorithm", "snr_lo_db", "snr_hi_db", "slope_bits_per_decade"))
        for name, slope in slopes.items():
            writer.writerow((name, repr(float(lo)), repr(float(hi)), repr(slope)))
        text = buf.getvalue()
    _emit(text, config.output_path)
    return EXIT_OK


def load_pareto_scenario(path, seed=None):
    """Scenario and point count from a ``pareto`` config file."""
    with open(path, encoding="utf-8") as fh:
        try:
            doc = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if not isinstance(doc, dict) or not isinstance(doc.get("pareto"), dict):
        raise ConfigError("config needs a 'pareto' section")
    section = dict(doc["pareto"])
    allowed = {"n_tx", "rho", "seed", "n_points", "h11", "h12", "h21", "h22", "output"}
    unknown = set(section) - allowed
    if unknown:
        raise ConfigError(f"unknown pareto keys: {sorted(unknown)}")
    if "rho" not in section:
        raise ConfigError("pareto section needs 'rho'")
    rho = float(section["rho"])
    n_points = int(section.get("n_points", 64))
    names = ("h11", "h12", "h21", "h22")
    explicit = [k for k in names if k in section]
    if explicit:
        if len(explicit) != 4:
            raise ConfigError("give all of h11, h12, h21, h22 or none")
        vecs = [np.array([complex(str(x).replace(" ", "")) for x in section[k]]) for k in names]
        scenario = MisoScenario(*vecs, rho=rho)
    else:
        if "n_tx" not in section:
            raise ConfigError("pareto section needs 'n_tx' or explicit channels")
        seed = section.get("seed", 0) if seed is None else seed
        scenario = random_miso_scenario(int(section["n_tx"]), rho, np.random.default_rng(seed))
    return scenario, n_points


def pareto_rows(solution):
    return [
        (p.zeta1, p.zeta2, p.gamma1, p.gamma2, *p.rates) for p in solution
    ]


def _cmd_pareto(args):
    scenario, n_points = load_pareto_scenario(args.config, seed=args.seed)
    rows = pareto_rows(solve_boundary(scenario, n_points=n_points))
    if (args.format or "csv") == "json":
        text = json.dumps([dict(zip(PARETO_HEADER, map(float, r))) for r in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(PARETO_HEADER)
        writer.writerows([repr(float(v)) for v in r] for r in rows)
        text = buf.getvalue()
    _emit(text, args.out)
    return EXIT_OK


def _cmd_verify_golden(args):
    reports = verify_all(args.root)
    for report in reports:
        print(report.summary())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


_COMMANDS = {
    "run": _cmd_run,
    "sweep-dof": _cmd_sweep_dof,
    "pareto": _cmd_pareto,
    "verify-golden": _cmd_verify_golden,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
