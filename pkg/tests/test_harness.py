import json
import os

import numpy as np
import pytest
import yaml

from cobeam import algorithms
from cobeam.cli import main
from cobeam.exceptions import ConfigError
from cobeam.harness import (
    CellStats,
    ExperimentConfig,
    SweepResult,
    dof_slope,
    export_results,
    load_config,
    load_results,
    run_experiment,
)
from cobeam.harness.experiment import channel_digest, trial_inputs

LOG2_10 = np.log2(10.0)


def make_config(**experiment):
    doc = {
        "scenario": {"n_links": 3, "n_tx_antennas": 2, "n_rx_antennas": 2, "sir_db": 10},
        "experiment": {
            "snr_sweep_db": [10, 20],
            "algorithms": ["dba-rf", "max-sinr"],
            "n_trials": 3,
            "base_seed": 5,
            "max_iters": 60,
        },
    }
    doc["experiment"].update(experiment)
    return ExperimentConfig.from_dict(doc)


def write_yaml(tmp_path, doc, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc))
    return str(path)


class TestConfig:
    def test_db_conversion_once(self):
        cfg = make_config()
        assert cfg.scenario.sir_linear == (pytest.approx(10.0),) * 3
        sc = cfg.scenario.at_snr(20.0)
        assert sc.noise_powers == (pytest.approx(0.01),) * 3

    def test_offsets(self):
        cfg = ExperimentConfig.from_dict(
            {
                "scenario": {
                    "n_links": 3, "n_tx_antennas": 2, "n_rx_antennas": 2,
                    "sir_linear": [10, 10, 0.1], "snr_offset_db": [0, 0, -20],
                },
                "experiment": {"snr_sweep_db": 40, "algorithms": "dba-rf", "n_trials": 1, "base_seed": 0},
            }
        )
        np.testing.assert_allclose(cfg.scenario.at_snr(40).noise_powers, [1e-4, 1e-4, 1e-2])
        assert cfg.snr_sweep_db == (40.0,)

    def test_round_trip(self, tmp_path):
        cfg = make_config(dof_range_db=[10, 20])
        path = write_yaml(tmp_path, cfg.to_dict())
        assert load_config(path) == cfg

    @pytest.mark.parametrize(
        "change",
        [
            {"n_trials": 0},
            {"snr_sweep_db": []},
            {"algorithms": []},
            {"algorithms": ["dba-rf", "dba-rf"]},
            {"algorithms": ["wmmse"]},
            {"init_mode": "zeros"},
            {"workers": 0},
            {"base_seed": -1},
            {"unexpected": 1},
        ],
    )
    def test_invalid(self, change):
        with pytest.raises(ConfigError):
            make_config(**change)

    def test_schema_errors(self, tmp_path):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"scenario": {}})
        bad = make_config().to_dict()
        bad["scenario"]["sir_db"] = 3
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict(bad)
        path = tmp_path / "broken.yaml"
        path.write_text("scenario: [unclosed")
        with pytest.raises(ConfigError):
            load_config(str(path))


class TestExperiment:
    def test_single_cell(self):
        cfg = make_config(n_trials=1, algorithms=["dba-rf"], snr_sweep_db=[20])
        sweep = run_experiment(cfg)
        assert len(sweep) == 1
        assert sweep[(20.0, "dba-rf")].n_trials == 1
        assert sweep[(20.0, "dba-rf")].stderr == 0.0

    def test_bit_exact_replay(self):
        a, b = run_experiment(make_config()), run_experiment(make_config())
        assert a.cells == b.cells

    def test_adding_trials_keeps_existing(self):
        small = run_experiment(make_config(n_trials=2))
        large = run_experiment(make_config(n_trials=4))
        for key, samples in small.samples.items():
            assert large.samples[key][:2] == samples

    def test_workers_do_not_change_results(self):
        assert run_experiment(make_config(workers=2)).cells == run_experiment(make_config()).cells

    def test_paired_inputs(self, monkeypatch):
        seen = []
        registry = dict(algorithms.ALGORITHMS)

        def spy(name):
            def run(ch, init, settings):
                seen.append((name, channel_digest(ch), init.digest()))
                return registry[name](ch, init, settings)
            return run

        for name in registry:
            monkeypatch.setitem(algorithms.ALGORITHMS, name, spy(name))
        cfg = make_config(algorithms=["dba-rf", "sr-max", "alt-min"], max_iters=5)
        sweep = run_experiment(cfg)
        per_cell = 3
        groups = [seen[k:k + per_cell] for k in range(0, len(seen), per_cell)]
        assert len(groups) == cfg.n_trials * len(cfg.snr_sweep_db)
        for group in groups:
            assert [g[0] for g in group] == list(cfg.algorithms)
            assert len({g[1:] for g in group}) == 1
        # same fading and initialization at every SNR of a trial
        for t in range(cfg.n_trials):
            a, b = groups[2 * t], groups[2 * t + 1]
            assert a[0][2] == b[0][2] and a[0][1] != b[0][1]
            ch, _ = trial_inputs(cfg, t)
            assert sweep.input_digests[t][10.0][0] == channel_digest(
                ch.with_noise(cfg.scenario.at_snr(10.0).noise_powers)
            )
        counts = {key: len(v) for key, v in sweep.samples.items()}
        assert set(counts.values()) == {cfg.n_trials}

    def test_stats_match_samples(self):
        sweep = run_experiment(make_config(n_trials=4))
        rates = np.array([s[0] for s in sweep.samples[(20.0, "max-sinr")]])
        cell = sweep[(20.0, "max-sinr")]
        assert cell.mean_sum_rate == pytest.approx(rates.mean(), rel=1e-15)
        assert cell.stderr == pytest.approx(rates.std(ddof=1) / 2.0, rel=1e-12)
        assert 0.0 <= cell.conv_frac <= 1.0

    def test_ordering_at_20db(self):
        cfg = make_config(
            snr_sweep_db=[20], n_trials=50, max_iters=500,
            algorithms=["sr-max", "dba-rf", "max-sinr", "alt-min"],
        )
        s = run_experiment(cfg)
        m = {a: s[(20.0, a)].mean_sum_rate for a in cfg.algorithms}
        assert m["sr-max"] >= m["dba-rf"] - 2 * s[(20.0, "dba-rf")].stderr
        assert abs(m["dba-rf"] - m["max-sinr"]) < 0.05 * m["max-sinr"]
        assert m["max-sinr"] >= m["alt-min"]


def synthetic_sweep(values):
    cells = {}
    for (snr, alg), rate in values.items():
        cells[(snr, alg)] = CellStats(1, rate, 0.0, 1.0, 1.0, 0.0)
    return SweepResult(cells=cells)


class TestDofSlope:
    def test_flat(self):
        sweep = synthetic_sweep({(10.0, "a"): 3.0, (20.0, "a"): 3.0, (30.0, "a"): 3.0})
        assert dof_slope(sweep, "a", 10, 30) == pytest.approx(0.0, abs=1e-12)

    def test_two_point_and_least_squares(self):
        pts = {(0.0, "a"): 1.0, (10.0, "a"): 4.0, (20.0, "a"): 5.0, (30.0, "a"): 9.0}
        sweep = synthetic_sweep(pts)
        assert dof_slope(sweep, "a", 0, 10) == pytest.approx(3.0)
        x, y = np.array([0.0, 1.0, 2.0, 3.0]), np.array([1.0, 4.0, 5.0, 9.0])
        ref = np.sum((x - x.mean()) * (y - y.mean())) / np.sum((x - x.mean()) ** 2)
        assert dof_slope(sweep, "a", 0, 30) == pytest.approx(ref, rel=1e-12)

    def test_errors(self):
        sweep = synthetic_sweep({(10.0, "a"): 1.0, (20.0, "a"): 2.0})
        with pytest.raises(ValueError):
            dof_slope(sweep, "a", 10, 25)
        with pytest.raises(ValueError):
            dof_slope(sweep, "a", 20, 10)
        with pytest.raises(KeyError):
            dof_slope(sweep, "b", 10, 20)

    def test_single_link_slope(self):
        cfg = ExperimentConfig.from_dict(
            {
                "scenario": {"n_links": 1, "n_tx_antennas": 2, "n_rx_antennas": 2, "sir_db": 10},
                "experiment": {"snr_sweep_db": [30, 40, 50], "algorithms": ["dba-rf"],
                               "n_trials": 10, "base_seed": 3},
            }
        )
        slope = dof_slope(run_experiment(cfg), "dba-rf", 30, 50)
        assert abs(slope / LOG2_10 - 1) < 0.02


class TestExport:
    def test_empty_sweep(self, tmp_path):
        path = tmp_path / "empty.csv"
        export_results(SweepResult(), "csv", str(path))
        assert path.read_bytes() == b"snr_db,algorithm,mean_sum_rate,stderr,mean_iters,conv_frac,mean_leakage\n"

    def test_csv_round_trip(self, tmp_path):
        sweep = run_experiment(make_config())
        path = str(tmp_path / "out" / "r.csv")
        export_results(sweep, "csv", path)
        back = load_results(path)
        assert set(back.cells) == set(sweep.cells)
        for key, cell in sweep.cells.items():
            assert back.cells[key].as_row() == cell.as_row()
        assert b"\r\n" not in open(path, "rb").read()

    def test_json_round_trip_and_provenance(self, tmp_path):
        sweep = run_experiment(make_config())
        path = str(tmp_path / "r.json")
        export_results(sweep, "json", path)
        with open(path) as fh:
            doc = json.load(fh)
        assert doc["base_seed"] == 5
        assert doc["config"]["experiment"]["n_trials"] == 3
        back = load_results(path)
        assert back.config == sweep.config
        assert back.cells == sweep.cells
        assert run_experiment(back.config).cells == sweep.cells

    def test_errors(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")
        with pytest.raises(OSError):
            export_results(SweepResult(), "csv", str(blocker / "sub" / "r.csv"))
        with pytest.raises(ConfigError):
            export_results(SweepResult(), "xml", str(tmp_path / "r.xml"))


class TestCli:
    def test_run_csv_with_overrides(self, tmp_path):
        cfg = write_yaml(tmp_path, make_config().to_dict())
        out = tmp_path / "res.csv"
        assert main(["run", cfg, "--trials", "2", "--seed", "9", "--out", str(out)]) == 0
        back = load_results(str(out))
        ref = run_experiment(make_config(n_trials=2, base_seed=9))
        assert {k: c.as_row() for k, c in back.cells.items()} == {k: c.as_row() for k, c in ref.cells.items()}

    def test_run_json_stdout(self, tmp_path, capsys):
        cfg = write_yaml(tmp_path, make_config(n_trials=1).to_dict())
        assert main(["run", cfg, "--format", "json"]) == 0
        assert json.loads(capsys.readouterr().out)["base_seed"] == 5

    def test_sweep_dof(self, tmp_path, capsys):
        cfg = write_yaml(tmp_path, make_config(n_trials=1).to_dict())
        assert main(["sweep-dof", cfg, "--lo", "10", "--hi", "20"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "algorithm,snr_lo_db,snr_hi_db,slope_bits_per_decade"
        assert [line.split(",")[0] for line in lines[1:]] == ["dba-rf", "max-sinr"]
        assert main(["sweep-dof", cfg, "--lo", "15", "--hi", "20"]) == 2

    def test_pareto(self, tmp_path, capsys):
        cfg = write_yaml(tmp_path, {"pareto": {"n_tx": 2, "rho": 10.0, "seed": 3, "n_points": 8}})
        out = tmp_path / "p.csv"
        assert main(["pareto", cfg, "--out", str(out)]) == 0
        rows = out.read_text().splitlines()
        assert rows[0] == "zeta1,zeta2,gamma1,gamma2,rate1,rate2"
        assert len(rows) == 9
        z1, z2, g1, g2, r1, r2 = map(float, rows[1].split(","))
        assert r1 == pytest.approx(np.log2(1 + g1))

    def test_pareto_explicit_channels(self, tmp_path, capsys):
        doc = {"pareto": {"rho": 5.0, "n_points": 4, "h11": ["1+0.5j", "0.3"], "h12": ["0.2j", "1"],
                          "h21": ["1", "-1j"], "h22": ["0.7", "0.1+0.2j"]}}
        assert main(["pareto", write_yaml(tmp_path, doc), "--format", "json"]) == 0
        assert len(json.loads(capsys.readouterr().out)) == 4

    def test_exit_codes(self, tmp_path):
        assert main(["run", str(tmp_path / "missing.yaml")]) == 3
        bad = write_yaml(tmp_path, {"scenario": {"n_links": 3}})
        assert main(["run", bad]) == 2
        pareto_bad = write_yaml(tmp_path, {"pareto": {"n_tx": 2}}, "p.yaml")
        assert main(["pareto", pareto_bad]) == 2
        cfg = write_yaml(tmp_path, make_config(n_trials=1).to_dict(), "ok.yaml")
        blocker = tmp_path / "blocker"
        blocker.write_text("")
        assert main(["run", cfg, "--out", os.path.join(str(blocker), "x.csv")]) == 3
