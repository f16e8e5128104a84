"""
Seeded, paired Monte Carlo comparison of beamforming algorithms.

Trial ``t`` draws its randomness from
``numpy.random.SeedSequence(base_seed, spawn_key=(t,))``, split into one
child stream for the fading and one for the initial profile. Trial streams
are independent of ``n_trials``, so adding trials never perturbs existing
ones. Within a trial the fading is realized once and reused at every SNR
(only the noise powers change), and every algorithm starts from the same
profile.
"""

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import algorithms as _algorithms
from ..algorithms import AlgorithmSettings, initialize_profile
from ..metrics import ia_residual, sum_rate
from ..network import realize_channels

__all__ = [
    "CellStats",
    "TrialOutcome",
    "SweepResult",
    "trial_seed_sequence",
    "trial_inputs",
    "run_trial",
    "run_experiment",
    "dof_slope",
    "channel_digest",
]

SNR_MATCH_TOL = 1e-9


def trial_seed_sequence(base_seed, trial):
    return np.random.SeedSequence(int(base_seed), spawn_key=(int(trial),))


def channel_digest(channel_set):
    h = hashlib.sha256()
    for arr in (channel_set.channels, channel_set.gains, channel_set.noise_powers):
        h.update(np.ascontiguousarray(arr).tobytes())
    h.update(repr(float(channel_set.power)).encode())
    return h.hexdigest()


def trial_inputs(config, trial):
    """Fading realization (at the first sweep SNR) and initial profile of a trial."""
    fading_seq, init_seq = trial_seed_sequence(config.base_seed, trial).spawn(2)
    scenario = config.scenario.at_snr(config.snr_sweep_db[0])
    channels = realize_channels(scenario, rng=np.random.default_rng(fading_seq))
    init = initialize_profile(channels, config.init_mode, rng=np.random.default_rng(init_seq))
    return channels, init


@dataclass
class TrialOutcome:
    trial: int
    # (snr, algorithm) -> (sum rate, iterations, converged, relative leakage)
    values: dict
    input_digests: dict = field(default_factory=dict)


def run_trial(config, trial):
    channels, init = trial_inputs(config, trial)
    settings = AlgorithmSettings(
        max_iters=int(config.max_iters),
        tolerance=float(config.tolerance),
        lambda_cap=float(config.lambda_cap),
    )
    values, digests = {}, {}
    for snr in config.snr_sweep_db:
        noise = config.scenario.at_snr(snr).noise_powers
        ch = channels.with_noise(noise)
        digests[snr] = (channel_digest(ch), init.digest())
        for name in config.algorithms:
            # looked up at call time so tests can observe the inputs
            result = _algorithms.ALGORITHMS[name](ch, init, settings)
            values[(snr, name)] = (
                sum_rate(ch, result.profile),
                result.iterations_used,
                bool(result.converged),
                ia_residual(ch, result.profile),
            )
    return TrialOutcome(trial, values, digests)


def _run_chunk(args):
    config, trials = args
    return [run_trial(config, t) for t in trials]


@dataclass(frozen=True)
class CellStats:
    n_trials: int
    mean_sum_rate: float
    stderr: float
    mean_iters: float
    conv_frac: float
    mean_leakage: float

    def as_row(self):
        return (self.mean_sum_rate, self.stderr, self.mean_iters, self.conv_frac, self.mean_leakage)


def _cell_stats(samples):
    rates = np.array([s[0] for s in samples], dtype=float)
    n = rates.size
    stderr = float(np.std(rates, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
    return CellStats(
        n_trials=n,
        mean_sum_rate=float(np.mean(rates)),
        stderr=stderr,
        mean_iters=float(np.mean([s[1] for s in samples])),
        conv_frac=float(np.mean([s[2] for s in samples])),
        mean_leakage=float(np.mean([s[3] for s in samples])),
    )


@dataclass
class SweepResult:
    """Aggregated statistics per (SNR in dB, algorithm) cell.

    ``mean_leakage`` is the mean relative leakage (leakage over desired
    signal power) of the final profiles. ``samples`` keeps the per-trial
    values in trial order when the result was produced by
    :func:`run_experiment`.
    """

    cells: dict = field(default_factory=dict)
    config: object = None
    samples: dict = field(default_factory=dict)
    input_digests: list = field(default_factory=list)

    @property
    def snrs(self):
        return sorted({snr for snr, _ in self.cells})

    @property
    def algorithms(self):
        seen = []
        for _, name in self.cells:
            if name not in seen:
                seen.append(name)
        return seen

    def __getitem__(self, key):
        return self.cells[key]

    def __len__(self):
        return len(self.cells)

    def sum_rates(self, algorithm):
        """Per-trial sum rates of one algorithm, shape (n_snr, n_trials)."""
        return np.array([[s[0] for s in self.samples[(snr, algorithm)]] for snr in self.snrs])

    def curve(self, algorithm):
        snrs = np.array(self.snrs)
        return snrs, np.array([self.cells[(s, algorithm)].mean_sum_rate for s in snrs])


def run_experiment(config, workers=None):
    """Run every trial of ``config`` and aggregate per cell.

    Parameters
    ----------
    config : ExperimentConfig
    workers : int, optional
        Overrides ``config.workers``. Trials are dealt round-robin to the
        workers; results are always reduced in trial order, so the output is
        bit-identical for any worker count.

    Returns
    -------
    SweepResult
    """
    workers = int(config.workers if workers is None else workers)
    trials = list(range(int(config.n_trials)))
    if workers <= 1 or len(trials) == 1:
        outcomes = [run_trial(config, t) for t in trials]
    else:
        chunks = [trials[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_chunk, [(config, c) for c in chunks if c])
            outcomes = [o for part in parts for o in part]
        outcomes.sort(key=lambda o: o.trial)

    samples = {}
    for snr in config.snr_sweep_db:
        for name in config.algorithms:
            samples[(snr, name)] = [o.values[(snr, name)] for o in outcomes]
    cells = {key: _cell_stats(vals) for key, vals in samples.items()}
    return SweepResult(
        cells=cells,
        config=config,
        samples=samples,
        input_digests=[o.input_digests for o in outcomes],
    )


def _match_snr(snrs, value):
    for s in snrs:
        if abs(s - value) <= SNR_MATCH_TOL:
            return s
    raise ValueError(f"SNR {value} dB is not in the sweep {list(snrs)}")


def dof_slope(sweep, algorithm, snr_lo_db, snr_hi_db):
    """Sum-rate slope in bits per decade of SNR between two sweep points.

    Uses the two-point difference when only the endpoints lie in the range
    and a least-squares line through every sweep point in the range
    otherwise.

    Raises
    ------
    ValueError
        If either endpoint is not a sweep SNR, or ``snr_hi_db <= snr_lo_db``.
    KeyError
        If the algorithm is not in the sweep.
    """
    snrs = sweep.snrs
    lo = _match_snr(snrs, snr_lo_db)
    hi = _match_snr(snrs, snr_hi_db)
    if hi <= lo:
        raise ValueError("snr_hi_db must exceed snr_lo_db")
    if algorithm not in sweep.algorithms:
        raise KeyError(f"algorithm {algorithm!r} not in sweep")
    x = np.array([s for s in snrs if lo <= s <= hi])
    y = np.array([sweep.cells[(s, algorithm)].mean_sum_rate for s in x])
    if x.size == 2:
        return float((y[1] - y[0]) / ((x[1] - x[0]) / 10.0))
    return float(np.polyfit(x / 10.0, y, 1)[0])
