import numpy as np
import pytest
from conftest import loop_sinr, random_network, random_profile

from cobeam.metrics import ia_residual, link_rates, signal_power, sum_rate, total_leakage
from cobeam.network import ChannelSet
from cobeam.strategies import BeamformerProfile


def single_link(gain, noise=1.0):
    ch = np.zeros((1, 1, 1, 1), dtype=complex)
    ch[0, 0, 0, 0] = gain
    return ChannelSet(ch, np.ones((1, 1)), np.array([noise]), 1.0)


def test_unit_sinr_gives_one_bit():
    p = BeamformerProfile([[1.0]], [[1.0]])
    assert sum_rate(single_link(1.0), p) == pytest.approx(1.0)
    assert sum_rate(single_link(0.0), p) == 0.0


def test_sum_rate_per_link_oracle(network, profile):
    expected = sum(np.log2(1 + g) for g in loop_sinr(network, profile))
    assert sum_rate(network, profile) == pytest.approx(expected, abs=1e-12)
    np.testing.assert_allclose(link_rates(network, profile), np.log2(1 + loop_sinr(network, profile)))


def test_leakage_loop_oracle(network, profile):
    H, P = network.channels, network.power
    ref = sum(
        P * abs(np.conj(profile.rx[i]) @ H[i, j] @ profile.tx[j]) ** 2
        for i in range(3)
        for j in range(3)
        if i != j
    )
    sig = sum(P * abs(np.conj(profile.rx[i]) @ H[i, i] @ profile.tx[i]) ** 2 for i in range(3))
    assert total_leakage(network, profile) == pytest.approx(ref, rel=1e-12)
    assert signal_power(network, profile) == pytest.approx(sig, rel=1e-12)
    assert ia_residual(network, profile) == pytest.approx(ref / sig, rel=1e-12)
    assert ia_residual(network, profile) > 0


def test_zero_cross_channels(rng):
    ch = random_network(rng)
    channels = ch.channels * np.eye(3)[:, :, None, None]
    clean = ChannelSet(channels, ch.gains, ch.noise_powers, ch.power)
    p = random_profile(clean, rng)
    assert total_leakage(clean, p) == 0.0
    assert ia_residual(clean, p) == 0.0


def test_zero_signal_residual():
    ch = np.zeros((2, 2, 1, 1), dtype=complex)
    ch[0, 1] = 1.0
    net = ChannelSet(ch, np.ones((2, 2)), np.ones(2), 1.0)
    p = BeamformerProfile(np.ones((2, 1)), np.ones((2, 1)))
    assert ia_residual(net, p) == float("inf")
