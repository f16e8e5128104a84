"""
Golden regression records.

Each record lives in its own directory under ``golden/``::

    golden/<name>/config.yaml     experiment config (harness schema)
    golden/<name>/expected.csv    exported sweep
    golden/<name>/record.json     config hash, CSV digest, tolerance policy

Seeds fix every random draw and trials are always reduced in trial order,
so the default policy is ``exact`` for every column: the rerun must
reproduce the CSV byte for byte. A column may instead be marked
``stderr3``, which accepts ``|new - golden| <= 3 * golden stderr``; this is
meant for platforms whose BLAS reorders floating-point reductions.
"""

import csv
import hashlib
import io
import json
import os
from dataclasses import dataclass, field

import yaml

from .exceptions import ConfigError
from .harness.config import load_config
from .harness.experiment import run_experiment
from .harness.export import CSV_HEADER, results_to_csv

__all__ = [
    "GoldenRecord",
    "GoldenReport",
    "config_hash",
    "csv_digest",
    "create_golden",
    "load_record",
    "verify_golden",
    "verify_all",
    "TOLERANCE_POLICIES",
]

TOLERANCE_POLICIES = ("exact", "stderr3")
_KEY_COLUMNS = CSV_HEADER[:2]
_VALUE_COLUMNS = CSV_HEADER[2:]


def config_hash(config):
    """SHA-256 of the canonical JSON form of a config (output section excluded)."""
    data = config.to_dict()
    data.pop("output", None)
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


def csv_digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class GoldenRecord:
    name: str
    directory: str
    config_file: str = "config.yaml"
    expected_file: str = "expected.csv"
    config_sha256: str = ""
    csv_sha256: str = ""
    tolerance: dict = field(default_factory=lambda: {c: "exact" for c in _VALUE_COLUMNS})

    @property
    def config_path(self):
        return os.path.join(self.directory, self.config_file)

    @property
    def expected_path(self):
        return os.path.join(self.directory, self.expected_file)

    def to_dict(self):
        return {
            "name": self.name,
            "config_file": self.config_file,
            "expected_file": self.expected_file,
            "config_sha256": self.config_sha256,
            "csv_sha256": self.csv_sha256,
            "tolerance": dict(self.tolerance),
        }


@dataclass
class GoldenReport:
    name: str
    passed: bool
    errors: list = field(default_factory=list)
    # column -> list of (snr_db, algorithm, golden, new)
    column_diffs: dict = field(default_factory=dict)

    def summary(self):
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{status} {self.name}"]
        lines += [f"  error: {e}" for e in self.errors]
        for column, diffs in self.column_diffs.items():
            lines.append(f"  column {column}: {len(diffs)} mismatching rows")
            for snr, alg, old, new in diffs[:5]:
                lines.append(f"    snr={snr} {alg}: golden={old} new={new}")
        return "\n".join(lines)


def load_record(directory):
    path = os.path.join(directory, "record.json")
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return GoldenRecord(directory=directory, **data)


def create_golden(name, config, root):
    """Run ``config`` and write a new golden record under ``root/name``."""
    directory = os.path.join(root, name)
    os.makedirs(directory, exist_ok=True)
    config = config.replace(output_path=None, workers=1)
    record = GoldenRecord(name=name, directory=directory)
    with open(record.config_path, "w", encoding="utf-8", newline="\n") as fh:
        yaml.safe_dump(config.to_dict(), fh, sort_keys=False)
    text = results_to_csv(run_experiment(config))
    with open(record.expected_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    record.config_sha256 = config_hash(config)
    record.csv_sha256 = csv_digest(text)
    with open(os.path.join(directory, "record.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(record.to_dict(), fh, indent=2)
        fh.write("\n")
    return record


def _rows(text):
    reader = csv.DictReader(io.StringIO(text))
    return {(r["snr_db"], r["algorithm"]): r for r in reader}


def _compare(record, golden_text, new_text, report):
    old_rows, new_rows = _rows(golden_text), _rows(new_text)
    if set(old_rows) != set(new_rows):
        report.errors.append(
            f"row keys differ: missing {sorted(set(old_rows) - set(new_rows))}, "
            f"extra {sorted(set(new_rows) - set(old_rows))}"
        )
    for column in _VALUE_COLUMNS:
        policy = record.tolerance.get(column, "exact")
        if policy not in TOLERANCE_POLICIES:
            report.errors.append(f"unknown tolerance policy {policy!r} for {column}")
            continue
        diffs = []
        for key in sorted(set(old_rows) & set(new_rows)):
            old, new = old_rows[key][column], new_rows[key][column]
            if policy == "exact":
                ok = old == new
            else:
                bound = 3.0 * float(old_rows[key]["stderr"])
                ok = abs(float(new) - float(old)) <= bound
            if not ok:
                diffs.append((key[0], key[1], old, new))
        if diffs:
            report.column_diffs[column] = diffs


def verify_golden(record, overrides=None):
    """Rerun a golden experiment and compare it with the stored CSV.

    Parameters
    ----------
    record : GoldenRecord or str
        A record, or the directory holding ``record.json``.
    overrides : dict, optional
        ExperimentConfig fields replaced before the rerun (for example a
        different ``base_seed``); the config hash check is skipped then.

    Returns
    -------
    GoldenReport
        Problems such as a missing config are reported, never raised.
    """
    name = getattr(record, "name", None) or os.path.basename(os.path.normpath(str(record)))
    report = GoldenReport(name=name, passed=False)
    try:
        if not isinstance(record, GoldenRecord):
            record = load_record(record)
        config = load_config(record.config_path)
        with open(record.expected_path, encoding="utf-8", newline="") as fh:
            golden_text = fh.read()
    except (OSError, ValueError, TypeError, ConfigError) as exc:
        report.errors.append(f"{type(exc).__name__}: {exc}")
        return report

    if overrides:
        config = config.replace(**overrides)
    elif config_hash(config) != record.config_sha256:
        report.errors.append("config hash does not match the record")
    if csv_digest(golden_text) != record.csv_sha256:
        report.errors.append("expected CSV does not match its recorded digest")

    new_text = results_to_csv(run_experiment(config.replace(workers=1)))
    if csv_digest(new_text) != record.csv_sha256:
        _compare(record, golden_text, new_text, report)
        strict = [c for c, p in record.tolerance.items() if p == "exact"]
        if not report.column_diffs and not report.errors and len(strict) == len(_VALUE_COLUMNS):
            report.errors.append("CSV digest mismatch")
    report.passed = not report.errors and not report.column_diffs
    return report


def verify_all(root):
    """Verify every record directory under ``root``; a missing root is an error."""
    if not os.path.isdir(root):
        return [GoldenReport(name=str(root), passed=False, errors=[f"no golden directory {root}"])]
    dirs = sorted(
        os.path.join(root, d) for d in os.listdir(root) if os.path.isdir(os.path.join(root, d))
    )
    if not dirs:
        return [GoldenReport(name=str(root), passed=False, errors=["no golden records found"])]
    return [verify_golden(d) for d in dirs]
