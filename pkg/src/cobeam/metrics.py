"""Network-level figures of merit: sum rate and interference leakage."""

import numpy as np

from .strategies import effective_gains, sinr

__all__ = ["link_rates", "sum_rate", "total_leakage", "signal_power", "ia_residual"]


def link_rates(channel_set, profile):
    """Per-link rates ``log2(1 + SINR_i)`` in bits/s/Hz."""
    return np.log2(1.0 + sinr(channel_set, profile))


def sum_rate(channel_set, profile):
    return float(np.sum(link_rates(channel_set, profile)))


def _powers(channel_set, profile):
    return channel_set.power * np.abs(effective_gains(channel_set, profile)) ** 2


def _split(p):
    # summing off-diagonal terms directly keeps tiny leakage exact
    off = ~np.eye(p.shape[0], dtype=bool)
    return float(np.trace(p)), float(p[off].sum())


def total_leakage(channel_set, profile):
    """Absolute leakage ``sum_i sum_{j != i} |v_i^H H_ij w_j|^2 P``."""
    return _split(_powers(channel_set, profile))[1]


def signal_power(channel_set, profile):
    """Total desired received power ``sum_i |v_i^H H_ii w_i|^2 P``."""
    return float(np.trace(_powers(channel_set, profile)))


def ia_residual(channel_set, profile):
    """Leakage relative to the total desired received power.

    Zero exactly when every cross term ``v_i^H H_ij w_j`` vanishes.
    """
    signal, leak = _split(_powers(channel_set, profile))
    if signal <= 0.0:
        return float("inf") if leak > 0 else 0.0
    return float(leak / signal)
