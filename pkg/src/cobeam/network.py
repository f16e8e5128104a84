"""
Network realizations for the MIMO interference channel.

A realization holds every channel ``H[j, i]`` from transmitter ``i`` to
receiver ``j`` (shape ``N_r x N_t``), scaled by the slow large-scale gain
``alpha[j, i]``. Large-scale gains are *set* from per-link signal to
interference ratio targets instead of being drawn from a geometry model.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .exceptions import ConfigError
from .numerics import sample_complex_gaussian

__all__ = [
    "ScenarioConfig",
    "ChannelSet",
    "equal_split_gains",
    "realize_channels",
    "make_symmetric_scenario",
    "make_asymmetric_scenario",
    "average_link_snr",
    "db_to_linear",
]


def db_to_linear(value_db):
    return 10.0 ** (np.asarray(value_db, dtype=float) / 10.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """Dimensions, power budget, per-link noise and SIR layout of a scenario.

    All quantities are linear (not dB). Per-link tuples have ``n_links``
    entries.
    """

    n_links: int
    n_tx_antennas: int
    n_rx_antennas: int
    power: float
    noise_powers: tuple
    direct_gains: tuple
    sir_targets: tuple
    rng_seed: int = 0
    max_iters: int = 500
    tolerance: float = 1e-6

    def __post_init__(self):
        for name in ("noise_powers", "direct_gains", "sir_targets"):
            object.__setattr__(self, name, tuple(float(x) for x in getattr(self, name)))
        for name in ("n_links", "n_tx_antennas", "n_rx_antennas", "max_iters"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be >= 1")
        if not self.power > 0:
            raise ConfigError("power must be > 0")
        if not self.tolerance > 0:
            raise ConfigError("tolerance must be > 0")
        for name in ("noise_powers", "direct_gains", "sir_targets"):
            values = getattr(self, name)
            if len(values) != self.n_links:
                raise ConfigError(f"{name} needs {self.n_links} entries, got {len(values)}")
            if not all(np.isfinite(v) and v > 0 for v in values):
                raise ConfigError(f"{name} entries must be finite and > 0")

    def replace(self, **changes):
        data = asdict(self)
        data.update(changes)
        return ScenarioConfig(**data)

    def to_dict(self):
        data = asdict(self)
        for key in ("noise_powers", "direct_gains", "sir_targets"):
            data[key] = list(data[key])
        return data

    @classmethod
    def from_dict(cls, data):
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc


@dataclass(frozen=True, eq=False)
class ChannelSet:
    """One realization of all channels of the network.

    Attributes
    ----------
    channels : ndarray, shape (N_c, N_c, N_r, N_t)
        ``channels[j, i]`` is the channel from Tx ``i`` to Rx ``j``.
    gains : ndarray, shape (N_c, N_c)
        Large-scale gains ``alpha[j, i]``.
    noise_powers : ndarray, shape (N_c,)
    power : float
        Transmit power ``P`` shared by all transmitters.
    """

    channels: np.ndarray
    gains: np.ndarray
    noise_powers: np.ndarray
    power: float
    config: ScenarioConfig = field(default=None, repr=False)

    @property
    def n_links(self):
        return self.channels.shape[0]

    @property
    def n_rx(self):
        return self.channels.shape[2]

    @property
    def n_tx(self):
        return self.channels.shape[3]

    def direct(self):
        """Stack of direct channels ``H[i, i]``, shape (N_c, N_r, N_t)."""
        idx = np.arange(self.n_links)
        return self.channels[idx, idx]

    def with_noise(self, noise_powers, power=None):
        """Same fading realization with different noise powers (and power)."""
        return ChannelSet(
            self.channels,
            self.gains,
            np.asarray(noise_powers, dtype=float),
            self.power if power is None else float(power),
            self.config,
        )


def equal_split_gains(config):
    """Large-scale gains splitting each receiver's interference budget evenly.

    ``alpha[i, j] = alpha[i, i] / (SIR_i * (N_c - 1))`` for ``j != i``, so
    that ``alpha[i, i] / sum_{j != i} alpha[i, j] == SIR_i``.
    """
    n = config.n_links
    direct = np.asarray(config.direct_gains)
    gains = np.empty((n, n))
    if n > 1:
        cross = direct / (np.asarray(config.sir_targets) * (n - 1))
        gains[:] = cross[:, None]
    np.fill_diagonal(gains, direct)
    return gains


def realize_channels(config, rng=None, gain_layout=equal_split_gains):
    """Draw a fading realization ``H[j, i] = sqrt(alpha[j, i]) * Hbar[j, i]``.

    Parameters
    ----------
    config : ScenarioConfig
    rng : numpy.random.Generator, optional
        Defaults to ``numpy.random.default_rng(config.rng_seed)``. The
        small-scale fading draws depend only on the generator state and the
        dimensions, so configs differing in noise or gains share fading.
    gain_layout : callable
        Maps the config to the ``(N_c, N_c)`` large-scale gain matrix.

    Returns
    -------
    ChannelSet
    """
    if rng is None:
        rng = np.random.default_rng(config.rng_seed)
    n = config.n_links
    hbar = sample_complex_gaussian(
        config.n_rx_antennas, config.n_tx_antennas, rng, batch_shape=(n, n)
    )
    gains = np.asarray(gain_layout(config), dtype=float)
    if gains.shape != (n, n):
        raise ConfigError(f"gain layout must be ({n}, {n}), got {gains.shape}")
    channels = np.sqrt(gains)[:, :, None, None] * hbar
    return ChannelSet(
        channels=channels,
        gains=gains,
        noise_powers=np.asarray(config.noise_powers, dtype=float),
        power=float(config.power),
        config=config,
    )


def make_symmetric_scenario(n_links, n_tx, n_rx, snr_db, sir_db, power=1.0, **settings):
    """Scenario with identical SNR and SIR on every link; ``alpha_ii = 1``."""
    noise = power / float(db_to_linear(snr_db))
    sir = float(db_to_linear(sir_db))
    return ScenarioConfig(
        n_links=n_links,
        n_tx_antennas=n_tx,
        n_rx_antennas=n_rx,
        power=power,
        noise_powers=(noise,) * n_links,
        direct_gains=(1.0,) * n_links,
        sir_targets=(sir,) * n_links,
        **settings,
    )


def make_asymmetric_scenario(
    n_links, n_tx, n_rx, snr_db_per_link, sir_linear_per_link, power=1.0, **settings
):
    """Scenario with per-link SNR (dB) and per-link linear SIR targets.

    Raises
    ------
    ConfigError
        If either per-link sequence does not have `n_links` entries.
    """
    snr_db = np.atleast_1d(np.asarray(snr_db_per_link, dtype=float))
    sir = np.atleast_1d(np.asarray(sir_linear_per_link, dtype=float))
    if snr_db.size != n_links or sir.size != n_links:
        raise ConfigError(
            f"per-link SNR/SIR need {n_links} entries, got {snr_db.size} and {sir.size}"
        )
    noise = power / db_to_linear(snr_db)
    return ScenarioConfig(
        n_links=n_links,
        n_tx_antennas=n_tx,
        n_rx_antennas=n_rx,
        power=power,
        noise_powers=tuple(noise),
        direct_gains=(1.0,) * n_links,
        sir_targets=tuple(sir),
        **settings,
    )


def average_link_snr(channel_set, link_index):
    """Average SNR ``P * alpha_ii / sigma_i^2`` of a link (fading-independent)."""
    if not 0 <= link_index < channel_set.n_links:
        raise IndexError(f"link index {link_index} out of range")
    i = link_index
    return channel_set.power * channel_set.gains[i, i] / channel_set.noise_powers[i]
