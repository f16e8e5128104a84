"""
Experiment configuration and its YAML file schema.

A config file has three sections. SNR and SIR are given in dB at this
interface and converted to linear units once, in :class:`ScenarioTemplate`.

.. code-block:: yaml

    scenario:                     # required
      n_links: 3                  # required, int >= 1
      n_tx_antennas: 2            # required, int >= 1
      n_rx_antennas: 2            # required, int >= 1
      power: 1.0                  # optional, linear transmit power P (default 1)
      sir_db: 10                  # scalar or per-link list (dB); or
      # sir_linear: [10, 10, 0.1] # per-link linear SIR (exclusive with sir_db)
      snr_offset_db: [0, 0, -20]  # optional per-link offset added to the sweep SNR
    experiment:                   # required
      snr_sweep_db: [30, 40, 50]  # required, nonempty list (dB)
      algorithms: [dba-rf, sr-max, max-sinr]   # required, nonempty
      n_trials: 50                # required, int >= 1
      base_seed: 2024             # required, int >= 0
      init_mode: random-uniform-sphere   # optional (or matched-filter)
      max_iters: 500              # optional
      tolerance: 1.0e-6           # optional, chordal distance
      lambda_cap: 1.0e12          # optional, |lambda| clamp for DBA-RF
      workers: 1                  # optional, parallel trial workers
    output:                       # optional
      path: results/run.csv
      format: csv                 # csv or json

At sweep point ``s`` link ``i`` has average SNR ``s + snr_offset_db[i]``
dB, realized as noise power ``P / 10**((s + offset_i) / 10)`` with
``alpha_ii = 1``.
"""

from dataclasses import asdict, dataclass, field, replace

import numpy as np
import yaml

from ..algorithms import ALGORITHMS
from ..exceptions import ConfigError
from ..network import ScenarioConfig, db_to_linear

__all__ = ["ScenarioTemplate", "ExperimentConfig", "load_config", "INIT_MODES", "FORMATS"]

INIT_MODES = ("random-uniform-sphere", "matched-filter")
FORMATS = ("csv", "json")


def _as_tuple(value, n, name):
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.size == 1:
        arr = np.repeat(arr, n)
    if arr.size != n:
        raise ConfigError(f"{name} needs 1 or {n} entries, got {arr.size}")
    return tuple(float(x) for x in arr)


@dataclass(frozen=True)
class ScenarioTemplate:
    """Scenario with everything fixed except the swept SNR.

    ``sir_linear`` and ``snr_offset_db`` always hold one entry per link.
    """

    n_links: int
    n_tx_antennas: int
    n_rx_antennas: int
    sir_linear: tuple
    snr_offset_db: tuple = None
    power: float = 1.0

    def __post_init__(self):
        n = int(self.n_links)
        if n < 1:
            raise ConfigError("n_links must be >= 1")
        object.__setattr__(self, "sir_linear", _as_tuple(self.sir_linear, n, "sir"))
        offsets = 0.0 if self.snr_offset_db is None else self.snr_offset_db
        object.__setattr__(self, "snr_offset_db", _as_tuple(offsets, n, "snr_offset_db"))
        # builds once to run the scenario validation
        self.at_snr(0.0)

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        if "sir_db" in data and "sir_linear" in data:
            raise ConfigError("give either sir_db or sir_linear, not both")
        if "sir_db" in data:
            data["sir_linear"] = tuple(np.atleast_1d(db_to_linear(data.pop("sir_db"))))
        known = set(cls.__dataclass_fields__)
        missing = {"n_links", "n_tx_antennas", "n_rx_antennas", "sir_linear"} - set(data)
        if missing:
            raise ConfigError(f"scenario is missing keys: {sorted(missing)}")
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self):
        data = asdict(self)
        data["sir_linear"] = list(self.sir_linear)
        data["snr_offset_db"] = list(self.snr_offset_db)
        return data

    def snr_db(self, sweep_snr_db):
        """Per-link average SNRs (dB) at a sweep point."""
        return np.asarray(self.snr_offset_db) + float(sweep_snr_db)

    def at_snr(self, sweep_snr_db, **settings):
        """The :class:`ScenarioConfig` at one sweep point."""
        noise = self.power / db_to_linear(self.snr_db(sweep_snr_db))
        return ScenarioConfig(
            n_links=int(self.n_links),
            n_tx_antennas=int(self.n_tx_antennas),
            n_rx_antennas=int(self.n_rx_antennas),
            power=float(self.power),
            noise_powers=tuple(noise),
            direct_gains=(1.0,) * int(self.n_links),
            sir_targets=self.sir_linear,
            **settings,
        )


@dataclass(frozen=True)
class ExperimentConfig:
    scenario: ScenarioTemplate
    snr_sweep_db: tuple
    algorithms: tuple
    n_trials: int
    base_seed: int
    output_path: str = None
    output_format: str = "csv"
    init_mode: str = "random-uniform-sphere"
    max_iters: int = 500
    tolerance: float = 1e-6
    lambda_cap: float = 1e12
    workers: int = 1
    dof_range_db: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "snr_sweep_db", tuple(float(s) for s in self.snr_sweep_db))
        if isinstance(self.algorithms, str):
            object.__setattr__(self, "algorithms", (self.algorithms,))
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.snr_sweep_db:
            raise ConfigError("snr_sweep_db must be nonempty")
        if not self.algorithms:
            raise ConfigError("algorithms must be nonempty")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("algorithms must not repeat")
        bad = [a for a in self.algorithms if a not in ALGORITHMS]
        if bad:
            raise ConfigError(f"unknown algorithms {bad}; choose from {sorted(ALGORITHMS)}")
        if int(self.n_trials) < 1:
            raise ConfigError("n_trials must be >= 1")
        if int(self.base_seed) < 0:
            raise ConfigError("base_seed must be a nonnegative integer")
        if self.init_mode not in INIT_MODES:
            raise ConfigError(f"init_mode must be one of {INIT_MODES}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"output format must be one of {FORMATS}")
        if int(self.max_iters) < 1 or not self.tolerance > 0 or not self.lambda_cap > 0:
            raise ConfigError("max_iters, tolerance and lambda_cap must be positive")
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")
        if self.dof_range_db is not None:
            lo, hi = (float(x) for x in self.dof_range_db)
            object.__setattr__(self, "dof_range_db", (lo, hi))

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        """Nested dict in the config-file layout (round-trips through from_dict)."""
        experiment = {
            "snr_sweep_db": list(self.snr_sweep_db),
            "algorithms": list(self.algorithms),
            "n_trials": int(self.n_trials),
            "base_seed": int(self.base_seed),
            "init_mode": self.init_mode,
            "max_iters": int(self.max_iters),
            "tolerance": float(self.tolerance),
            "lambda_cap": float(self.lambda_cap),
            "workers": int(self.workers),
        }
        if self.dof_range_db is not None:
            experiment["dof_range_db"] = list(self.dof_range_db)
        out = {"scenario": self.scenario.to_dict(), "experiment": experiment}
        out["output"] = {"path": self.output_path, "format": self.output_format}
        return out

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping")
        unknown = set(data) - {"scenario", "experiment", "output"}
        if unknown:
            raise ConfigError(f"unknown config sections: {sorted(unknown)}")
        for section in ("scenario", "experiment"):
            if not isinstance(data.get(section), dict):
                raise ConfigError(f"missing section {section!r}")
        exp = dict(data["experiment"])
        required = {"snr_sweep_db", "algorithms", "n_trials", "base_seed"}
        missing = required - set(exp)
        if missing:
            raise ConfigError(f"experiment is missing keys: {sorted(missing)}")
        allowed = required | {"init_mode", "max_iters", "tolerance", "lambda_cap",
                              "workers", "dof_range_db"}
        unknown = set(exp) - allowed
        if unknown:
            raise ConfigError(f"unknown experiment keys: {sorted(unknown)}")
        output = dict(data.get("output") or {})
        unknown = set(output) - {"path", "format"}
        if unknown:
            raise ConfigError(f"unknown output keys: {sorted(unknown)}")
        sweep = exp.pop("snr_sweep_db")
        if not isinstance(sweep, (list, tuple)):
            sweep = [sweep]
        try:
            return cls(
                scenario=ScenarioTemplate.from_dict(data["scenario"]),
                snr_sweep_db=sweep,
                output_path=output.get("path"),
                output_format=output.get("format", "csv"),
                **exp,
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


def load_config(path):
    """Read an :class:`ExperimentConfig` from a YAML file.

    Raises
    ------
    ConfigError
        On malformed YAML or schema violations.
    OSError
        If the file cannot be read.
    """
    with open(path, encoding="utf-8") as fh:
        try:
            data = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    return ExperimentConfig.from_dict(data)
