"""CSV and JSON persistence of sweep results.

Floats are written with :func:`repr`, the shortest decimal string that
parses back to the identical double, so export followed by
:func:`load_results` is exact.
"""

import csv
import io
import json
import os

from ..exceptions import ConfigError
from .config import FORMATS
from .experiment import CellStats, SweepResult

__all__ = ["CSV_HEADER", "export_results", "load_results", "results_to_csv", "results_to_json"]

CSV_HEADER = ("snr_db", "algorithm", "mean_sum_rate", "stderr", "mean_iters", "conv_frac", "mean_leakage")
_STAT_FIELDS = CSV_HEADER[2:]


def _ordered_cells(sweep):
    # sweep order from the config when available, else sorted SNR
    if sweep.config is not None:
        snrs, names = sweep.config.snr_sweep_db, sweep.config.algorithms
        keys = [(s, a) for s in snrs for a in names if (s, a) in sweep.cells]
    else:
        keys = sorted(sweep.cells, key=lambda k: (k[0], sweep.algorithms.index(k[1])))
    return [(k, sweep.cells[k]) for k in keys]


def results_to_csv(sweep):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for (snr, name), cell in _ordered_cells(sweep):
        writer.writerow([repr(float(snr)), name] + [repr(float(v)) for v in cell.as_row()])
    return buf.getvalue()


def results_to_json(sweep):
    results = {}
    for (snr, name), cell in _ordered_cells(sweep):
        row = dict(zip(_STAT_FIELDS, (float(v) for v in cell.as_row())))
        row["n_trials"] = cell.n_trials
        results.setdefault(repr(float(snr)), {})[name] = row
    config = sweep.config.to_dict() if sweep.config is not None else None
    doc = {
        "base_seed": None if config is None else config["experiment"]["base_seed"],
        "config": config,
        "results": results,
    }
    # json writes floats with repr, so values round-trip exactly
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def export_results(sweep, format, path):
    """Write a sweep to ``path`` as CSV or JSON (UTF-8, ``\\n`` line endings).

    Raises
    ------
    ConfigError
        For an unknown format.
    OSError
        If the path cannot be written.
    """
    if format not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {format!r}")
    text = results_to_csv(sweep) if format == "csv" else results_to_json(sweep)
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader, ()))
    if header != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {header}")
    cells = {}
    for row in reader:
        snr, name, *stats = row
        cells[(float(snr), name)] = CellStats(None, *(float(v) for v in stats))
    return SweepResult(cells=cells)


def _parse_json(text):
    from .config import ExperimentConfig

    doc = json.loads(text)
    cells = {}
    for snr, per_alg in doc["results"].items():
        for name, row in per_alg.items():
            stats = [float(row[k]) for k in _STAT_FIELDS]
            cells[(float(snr), name)] = CellStats(row.get("n_trials"), *stats)
    config = ExperimentConfig.from_dict(doc["config"]) if doc.get("config") else None
    return SweepResult(cells=cells, config=config)


def load_results(path, format=None):
    """Parse a file written by :func:`export_results` back into a SweepResult.

    Only the exported statistics are restored; ``samples`` stays empty and
    ``n_trials`` is ``None`` for CSV input.
    """
    if format is None:
        format = "json" if str(path).endswith(".json") else "csv"
    with open(path, encoding="utf-8", newline="") as fh:
        text = fh.read()
    return _parse_csv(text) if format == "csv" else _parse_json(text)
