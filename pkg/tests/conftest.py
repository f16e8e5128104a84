import numpy as np
import pytest

from cobeam.network import make_symmetric_scenario, realize_channels
from cobeam.numerics import random_unit_vectors
from cobeam.strategies import BeamformerProfile

# filled by test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_network(rng, n_links=3, n_tx=2, n_rx=2, snr_db=20.0, sir_db=10.0, **kw):
    config = make_symmetric_scenario(n_links, n_tx, n_rx, snr_db, sir_db, **kw)
    return realize_channels(config, rng)


def random_profile(channel_set, rng):
    n = channel_set.n_links
    return BeamformerProfile(
        random_unit_vectors(channel_set.n_tx, rng, (n,)),
        random_unit_vectors(channel_set.n_rx, rng, (n,)),
    )


def loop_sinr(channel_set, profile):
    """Per-link SINR written out with explicit loops (independent oracle)."""
    H, P = channel_set.channels, channel_set.power
    n = channel_set.n_links
    out = np.empty(n)
    for i in range(n):
        v = profile.rx[i]
        signal = P * abs(np.conj(v) @ H[i, i] @ profile.tx[i]) ** 2
        interference = sum(
            P * abs(np.conj(v) @ H[i, j] @ profile.tx[j]) ** 2 for j in range(n) if j != i
        )
        out[i] = signal / (interference + channel_set.noise_powers[i])
    return out


@pytest.fixture
def network(rng):
    return random_network(rng)


@pytest.fixture
def profile(network, rng):
    return random_profile(network, rng)
