"""
Iterative transmit/receive beamformer drivers.

All drivers share one skeleton: starting from a given profile, apply a
Jacobi-style sweep (every transmitter updated from the previous profile,
then every receiver, or the reverse order where the method requires it)
until the largest chordal displacement of any beamformer between two
consecutive sweeps falls below the tolerance, or the iteration budget runs
out. Non-convergence is reported through :attr:`AlgorithmResult.converged`,
never raised.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ConfigError
from .metrics import sum_rate, total_leakage
from .numerics import chordal_distance, dominant_eigenvector, least_eigenvector, random_unit_vectors
from .strategies import (
    BeamformerProfile,
    altruistic_matrix,
    altruistic_response,
    balanced_matrices,
    dba_weights,
    egoistic_matrix,
    egoistic_response,
    interference_covariance,
    max_sinr_receiver,
    optimal_pricing_weights,
)
from .network import ChannelSet

__all__ = [
    "AlgorithmSettings",
    "IterationRecord",
    "IterationTrace",
    "AlgorithmResult",
    "StopDecision",
    "stopping_check",
    "profile_displacement",
    "initialize_profile",
    "dba_rf_step",
    "sr_max_step",
    "max_sinr_step",
    "alt_min_receive_update",
    "alt_min_transmit_update",
    "alt_min_step",
    "run_dba_rf",
    "run_sr_max",
    "run_max_sinr",
    "run_alt_min",
    "run_egoistic",
    "run_altruistic",
    "ALGORITHMS",
]


@dataclass(frozen=True)
class AlgorithmSettings:
    max_iters: int = 500
    tolerance: float = 1e-6
    # |lambda| cap for the statistical weights; only binds at absurd SNRs.
    lambda_cap: float = 1e12

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be > 0")


@dataclass(frozen=True)
class IterationRecord:
    iteration: int
    sum_rate: float
    total_leakage: float
    displacement: float


@dataclass
class IterationTrace:
    """Per-iteration history; ``initial_*`` describe the starting profile."""

    initial_sum_rate: float = float("nan")
    initial_leakage: float = float("nan")
    records: list = field(default_factory=list)

    def append(self, record):
        if self.records and record.iteration <= self.records[-1].iteration:
            raise ValueError("iteration indices must increase")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    @property
    def sum_rates(self):
        return np.array([r.sum_rate for r in self.records])

    @property
    def leakages(self):
        return np.array([r.total_leakage for r in self.records])

    @property
    def displacements(self):
        return np.array([r.displacement for r in self.records])


@dataclass
class AlgorithmResult:
    profile: BeamformerProfile
    trace: IterationTrace
    converged: bool
    iterations_used: int

    @property
    def sum_rate(self):
        return self.trace.records[-1].sum_rate if self.trace.records else self.trace.initial_sum_rate


class StopDecision(enum.Enum):
    CONTINUE = "continue"
    CONVERGED = "converged"
    BUDGET_EXHAUSTED = "budget_exhausted"


def stopping_check(trace, tolerance, max_iters):
    """Decide whether an iteration should stop after the last trace record."""
    if not trace.records:
        raise ValueError("trace is empty")
    last = trace.records[-1]
    if last.displacement <= tolerance:
        return StopDecision.CONVERGED
    if last.iteration >= max_iters:
        return StopDecision.BUDGET_EXHAUSTED
    return StopDecision.CONTINUE


def profile_displacement(old, new):
    """Largest chordal distance over all transmit and receive vectors."""
    return float(
        max(
            np.max(chordal_distance(old.tx, new.tx)),
            np.max(chordal_distance(old.rx, new.rx)),
        )
    )


def initialize_profile(channel_set, mode="random-uniform-sphere", rng=None):
    """Starting profile shared by every algorithm in a comparison.

    Parameters
    ----------
    mode : {"random-uniform-sphere", "matched-filter"}
        Random mode draws every ``w_i`` and ``v_i`` uniformly on the complex
        unit sphere. Matched-filter mode uses the dominant right/left
        singular vectors of the direct channel ``H_ii``.
    rng : numpy.random.Generator
        Required in random mode.
    """
    n = channel_set.n_links
    if mode == "random-uniform-sphere":
        if rng is None:
            raise ValueError("random initialization needs an rng")
        tx = random_unit_vectors(channel_set.n_tx, rng, (n,))
        rx = random_unit_vectors(channel_set.n_rx, rng, (n,))
    elif mode == "matched-filter":
        U, _, Vh = np.linalg.svd(channel_set.direct())
        tx = np.conj(Vh[:, 0, :])
        rx = U[:, :, 0]
    else:
        raise ValueError(f"unknown initialization mode {mode!r}")
    return BeamformerProfile(tx, rx)


def _receive_update(channel_set, profile, tx):
    candidate = profile.replace(tx=tx)
    return candidate.replace(rx=max_sinr_receiver(channel_set, candidate))


def _weighted_transmit_update(channel_set, profile, weights):
    B = balanced_matrices(
        egoistic_matrix(channel_set, profile),
        altruistic_matrix(channel_set, profile),
        weights,
    )
    return dominant_eigenvector(B)


def dba_rf_step(channel_set, profile, weights):
    """One sweep: balanced transmit update with fixed weights, then Max-SINR Rx."""
    return _receive_update(
        channel_set, profile, _weighted_transmit_update(channel_set, profile, weights)
    )


def sr_max_step(channel_set, profile):
    """One sweep with weights recomputed from the current profile."""
    weights = optimal_pricing_weights(channel_set, profile)
    return _receive_update(
        channel_set, profile, _weighted_transmit_update(channel_set, profile, weights)
    )


def reverse_network(channel_set):
    """Reciprocal network: ``H_rev[i, j] = H[j, i]^H`` with the same powers."""
    rev = np.conj(np.transpose(channel_set.channels, (1, 0, 3, 2)))
    return ChannelSet(rev, channel_set.gains.T, channel_set.noise_powers, channel_set.power)


def max_sinr_step(channel_set, profile, reverse=None):
    """Forward Max-SINR receivers, then reverse-network Max-SINR transmitters."""
    if reverse is None:
        reverse = reverse_network(channel_set)
    rx = max_sinr_receiver(channel_set, profile)
    tx = max_sinr_receiver(reverse, BeamformerProfile(rx, profile.tx))
    return BeamformerProfile(tx, rx)


def alt_min_receive_update(channel_set, profile):
    """Receivers move to the least-interference direction ``V_min(Q_i^DL)``."""
    C = interference_covariance(channel_set, profile)
    Q = (C - channel_set.noise_powers[:, None, None] * np.eye(channel_set.n_rx)) / channel_set.power
    return profile.replace(rx=least_eigenvector(Q))


def alt_min_transmit_update(channel_set, profile):
    """Transmitters move to ``V_min(Q_i^UL)``, the altruistic response."""
    return profile.replace(tx=altruistic_response(channel_set, profile))


def alt_min_step(channel_set, profile):
    return alt_min_transmit_update(channel_set, alt_min_receive_update(channel_set, profile))


def _egoistic_step(channel_set, profile):
    return _receive_update(channel_set, profile, egoistic_response(channel_set, profile))


def _altruistic_step(channel_set, profile):
    return _receive_update(channel_set, profile, altruistic_response(channel_set, profile))


def _iterate(channel_set, init, settings, step):
    settings = settings or AlgorithmSettings()
    trace = IterationTrace(sum_rate(channel_set, init), total_leakage(channel_set, init))
    profile = init
    decision = StopDecision.CONTINUE
    for it in range(1, settings.max_iters + 1):
        new = step(channel_set, profile)
        trace.append(
            IterationRecord(
                iteration=it,
                sum_rate=sum_rate(channel_set, new),
                total_leakage=total_leakage(channel_set, new),
                displacement=profile_displacement(profile, new),
            )
        )
        profile = new
        decision = stopping_check(trace, settings.tolerance, settings.max_iters)
        if decision is not StopDecision.CONTINUE:
            break
    return AlgorithmResult(
        profile=profile,
        trace=trace,
        converged=decision is StopDecision.CONVERGED,
        iterations_used=len(trace),
    )


def run_dba_rf(channel_set, init, settings=None):
    """Distributed balancing with statistical weights and receiver feedback.

    The weights depend only on slow statistics and are computed once per
    realization. Each transmitter update uses only its own outgoing channels
    and the fed-back receive vectors.
    """
    settings = settings or AlgorithmSettings()
    weights = np.maximum(dba_weights(channel_set), -settings.lambda_cap)
    return _iterate(
        channel_set, init, settings, lambda ch, p: dba_rf_step(ch, p, weights)
    )


def run_sr_max(channel_set, init, settings=None):
    """Centralized sum-rate ascent with instantaneous optimal weights."""
    return _iterate(channel_set, init, settings, sr_max_step)


def run_max_sinr(channel_set, init, settings=None):
    reverse = reverse_network(channel_set)
    return _iterate(
        channel_set, init, settings, lambda ch, p: max_sinr_step(ch, p, reverse)
    )


def run_alt_min(channel_set, init, settings=None):
    """Leakage minimization, alternating receivers and transmitters."""
    return _iterate(channel_set, init, settings, alt_min_step)


def run_egoistic(channel_set, init, settings=None):
    return _iterate(channel_set, init, settings, _egoistic_step)


def run_altruistic(channel_set, init, settings=None):
    return _iterate(channel_set, init, settings, _altruistic_step)


ALGORITHMS = {
    "dba-rf": run_dba_rf,
    "sr-max": run_sr_max,
    "max-sinr": run_max_sinr,
    "alt-min": run_alt_min,
    "egoistic": run_egoistic,
    "altruistic": run_altruistic,
}
