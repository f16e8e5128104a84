"""Rebuild the checked-in golden records under golden/.

Run only when a change is *meant* to alter results; commit the new files
together with that change.
"""

import os

from cobeam.golden import create_golden
from cobeam.harness import ExperimentConfig

ROOT = os.path.join(os.path.dirname(os.path.abspath(__file__)), os.pardir, "golden")

GOLDENS = {
    "symmetric_322_small": {
        "scenario": {"n_links": 3, "n_tx_antennas": 2, "n_rx_antennas": 2, "sir_db": 10},
        "experiment": {
            "snr_sweep_db": [10, 30],
            "algorithms": ["dba-rf", "sr-max", "max-sinr", "alt-min"],
            "n_trials": 3,
            "base_seed": 11,
        },
    },
    "asymmetric_322_small": {
        "scenario": {
            "n_links": 3, "n_tx_antennas": 2, "n_rx_antennas": 2,
            "sir_linear": [10, 10, 0.1], "snr_offset_db": [0, 0, -20],
        },
        "experiment": {
            "snr_sweep_db": [40],
            "algorithms": ["dba-rf", "max-sinr", "egoistic", "altruistic"],
            "n_trials": 3,
            "base_seed": 12,
        },
    },
    "single_link_matched": {
        "scenario": {"n_links": 1, "n_tx_antennas": 3, "n_rx_antennas": 2, "sir_db": 10},
        "experiment": {
            "snr_sweep_db": [0, 20, 40],
            "algorithms": ["dba-rf", "egoistic"],
            "n_trials": 4,
            "base_seed": 13,
            "init_mode": "matched-filter",
        },
    },
}

if __name__ == "__main__":
    for name, doc in GOLDENS.items():
        record = create_golden(name, ExperimentConfig.from_dict(doc), ROOT)
        print(f"{name}: {record.csv_sha256}")
