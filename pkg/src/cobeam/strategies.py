"""
Single-step best responses on the MIMO interference channel.

Indexing follows the channel layout of :class:`~cobeam.network.ChannelSet`:
``H[j, i]`` is the channel from Tx ``i`` to Rx ``j``. Weight matrices
``lam[j, i]`` price the harm Tx ``i`` causes at Rx ``j``; their diagonal is
zero.

Most functions take an optional ``link`` argument. When it is ``None`` the
quantity is computed for every link at once and stacked along a leading
axis, which is what the iterative drivers use.

Each per-link response reads only the inputs a real transmitter or receiver
would have: Tx ``i`` uses its own outgoing channels ``H[:, i]`` and the
fed-back receive vectors; Rx ``i`` uses its incoming channels ``H[i, :]``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .exceptions import DegenerateInputError, DimensionError
from .numerics import canonicalize_phase, dominant_eigenvector, least_eigenvector

__all__ = [
    "BeamformerProfile",
    "effective_gains",
    "interference_covariance",
    "max_sinr_receiver",
    "sinr",
    "egoistic_matrix",
    "egoistic_response",
    "altruistic_matrix",
    "altruistic_response",
    "EquilibriumMatrices",
    "equilibrium_matrices",
    "dba_weights",
    "optimal_pricing_weights",
    "balanced_response",
    "balanced_matrices",
]

_DEGENERATE = 1e-300


def _normalize(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


@dataclass(frozen=True, eq=False)
class BeamformerProfile:
    """Transmit vectors ``tx[i]`` (length N_t) and receive vectors ``rx[i]``.

    Vectors are normalized on construction; the power constraint
    ``|w_i|^2 <= 1`` is always met with equality.
    """

    tx: np.ndarray
    rx: np.ndarray

    def __post_init__(self):
        tx = np.array(self.tx, dtype=complex, ndmin=2)
        rx = np.array(self.rx, dtype=complex, ndmin=2)
        if tx.ndim != 2 or rx.ndim != 2 or tx.shape[0] != rx.shape[0]:
            raise DimensionError(f"tx {tx.shape} / rx {rx.shape} must be (N_c, n) stacks")
        object.__setattr__(self, "tx", _normalize(tx))
        object.__setattr__(self, "rx", _normalize(rx))

    @property
    def n_links(self):
        return self.tx.shape[0]

    def replace(self, tx=None, rx=None):
        return BeamformerProfile(
            self.tx if tx is None else tx, self.rx if rx is None else rx
        )

    def rotated(self, tx_phases=None, rx_phases=None):
        """Copy with each vector multiplied by a unit-modulus phase."""
        tx = self.tx if tx_phases is None else self.tx * np.exp(1j * np.asarray(tx_phases))[:, None]
        rx = self.rx if rx_phases is None else self.rx * np.exp(1j * np.asarray(rx_phases))[:, None]
        return BeamformerProfile(tx, rx)

    def digest(self):
        """Hash of the exact array contents (for paired-trial checks)."""
        import hashlib

        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.tx).tobytes())
        h.update(np.ascontiguousarray(self.rx).tobytes())
        return h.hexdigest()


def effective_gains(channel_set, profile):
    """Scalar post-combining gains ``g[j, i] = v_j^H H[j, i] w_i``."""
    return np.einsum("jr,jirt,it->ji", np.conj(profile.rx), channel_set.channels, profile.tx)


def _received_vectors(channel_set, profile):
    # y[j, i] = H[j, i] w_i
    return np.einsum("jirt,it->jir", channel_set.channels, profile.tx)


def _signal_and_interference(channel_set, profile):
    p = channel_set.power * np.abs(effective_gains(channel_set, profile)) ** 2
    signal = np.diag(p).copy()
    np.fill_diagonal(p, 0.0)
    return signal, p.sum(axis=1)


def interference_covariance(channel_set, profile, link=None):
    """Interference-plus-noise covariance at the receivers.

    ``C_j = sum_{i != j} P H[j, i] w_i w_i^H H[j, i]^H + sigma_j^2 I``.

    Returns
    -------
    ndarray, shape (N_r, N_r) or (N_c, N_r, N_r) when ``link is None``.
    """
    y = _received_vectors(channel_set, profile)
    n = channel_set.n_links
    y = y * (1.0 - np.eye(n))[:, :, None]
    C = channel_set.power * np.einsum("jia,jib->jab", y, np.conj(y))
    C = C + channel_set.noise_powers[:, None, None] * np.eye(channel_set.n_rx)
    return C if link is None else C[link]


def max_sinr_receiver(channel_set, profile, link=None):
    """Max-SINR combiner ``v_j = C_j^{-1} H[j, j] w_j / |.|``.

    Raises
    ------
    DegenerateInputError
        If the desired signal ``H[j, j] w_j`` vanishes.
    """
    C = interference_covariance(channel_set, profile)
    desired = np.einsum("jrt,jt->jr", channel_set.direct(), profile.tx)
    if np.any(np.linalg.norm(desired, axis=-1) <= _DEGENERATE):
        raise DegenerateInputError("desired signal H_jj w_j is zero")
    v = np.linalg.solve(C, desired[..., None])[..., 0]
    v = _normalize(v)
    return v if link is None else v[link]


def sinr(channel_set, profile, link=None):
    """SINR ``|g_ii|^2 P / (sum_{j != i} |g_ij|^2 P + sigma_i^2)``."""
    signal, interference = _signal_and_interference(channel_set, profile)
    gamma = signal / (interference + channel_set.noise_powers)
    return gamma if link is None else gamma[link]


def _egoistic_vectors(channel_set, profile):
    # a_i = H[i, i]^H v_i
    return np.einsum("irt,ir->it", np.conj(channel_set.direct()), profile.rx)


def egoistic_matrix(channel_set, profile, link=None):
    """Rank-one egoistic matrix ``E_i = H_ii^H v_i v_i^H H_ii``."""
    a = _egoistic_vectors(channel_set, profile)
    E = np.einsum("ia,ib->iab", a, np.conj(a))
    return E if link is None else E[link]


def egoistic_response(channel_set, profile, link=None):
    """Own-SINR maximizing transmit vector, the dominant eigenvector of ``E_i``.

    Because ``E_i`` is a single outer product the eigenvector is the
    normalized ``H_ii^H v_i``; it is returned in canonical phase.

    Raises
    ------
    DegenerateInputError
        If ``H_ii^H v_i`` is zero.
    """
    a = _egoistic_vectors(channel_set, profile)
    if np.any(np.linalg.norm(a, axis=-1) <= _DEGENERATE):
        raise DegenerateInputError("egoistic matrix is zero (v_i orthogonal to range of H_ii)")
    w = canonicalize_phase(_normalize(a))
    return w if link is None else w[link]


def _altruistic_vectors(channel_set, profile):
    # b[j, i] = H[j, i]^H v_j
    return np.einsum("jirt,jr->jit", np.conj(channel_set.channels), profile.rx)


def altruistic_matrix(channel_set, profile, pair=None):
    """Altruistic matrix ``A_ji = H_ji^H v_j v_j^H H_ji`` for ``pair=(j, i)``.

    With ``pair=None`` the full stack ``A[j, i]`` of shape
    (N_c, N_c, N_t, N_t) is returned (diagonal blocks included).
    """
    b = _altruistic_vectors(channel_set, profile)
    if pair is not None:
        j, i = pair
        return np.outer(b[j, i], np.conj(b[j, i]))
    return np.einsum("jia,jib->jiab", b, np.conj(b))


class EquilibriumMatrices(NamedTuple):
    """``egoistic[i] = E_i`` and ``altruistic[j, i] = A_ji`` for one profile."""

    egoistic: np.ndarray
    altruistic: np.ndarray


def equilibrium_matrices(channel_set, profile):
    return EquilibriumMatrices(
        egoistic_matrix(channel_set, profile), altruistic_matrix(channel_set, profile)
    )


def _caused_interference_matrices(channel_set, profile):
    # Q_i = sum_{j != i} A_ji, shape (N_c, N_t, N_t)
    A = altruistic_matrix(channel_set, profile)
    mask = 1.0 - np.eye(channel_set.n_links)
    return np.einsum("ji,jiab->iab", mask, A)


def altruistic_response(channel_set, profile, link=None):
    """Caused-interference minimizing transmit vector.

    Least eigenvector of ``sum_{j != i} A_ji``. For a single link the matrix
    is zero and the first canonical basis vector is returned.
    """
    w = least_eigenvector(_caused_interference_matrices(channel_set, profile))
    return w if link is None else w[link]


def dba_weights(channel_set):
    """Statistical pricing weights ``lam[j, i]`` from average link SNRs.

    ``lam[j, i] = -(1 + 1/snr_i) / (1 + 1/snr_j) * snr_j`` where
    ``snr_i = P alpha_ii / sigma_i^2``. Diagonal entries are zero.
    """
    g = channel_set.power * np.diag(channel_set.gains) / channel_set.noise_powers
    lam = -((1.0 + 1.0 / g)[None, :] / (1.0 + 1.0 / g)[:, None]) * g[:, None]
    np.fill_diagonal(lam, 0.0)
    return lam


def optimal_pricing_weights(channel_set, profile):
    """Instantaneous sum-rate stationarity weights ``lam_opt[j, i]``.

    ``lam_opt[j, i] = -(S_j / T_j) * (T_i / I_j)`` where ``S_j`` is the
    desired power at Rx ``j``, ``T_j`` the total received power plus noise
    and ``I_j = T_j - S_j`` the interference plus noise. These make
    ``(E_i + sum_j lam_opt[j, i] A_ji) w_i`` proportional to the gradient of
    the sum rate with respect to ``w_i^H``. Requires global CSI.
    """
    signal, interference = _signal_and_interference(channel_set, profile)
    interference = interference + channel_set.noise_powers
    total = signal + interference
    lam = -(signal / total)[:, None] * total[None, :] / interference[:, None]
    np.fill_diagonal(lam, 0.0)
    return lam


def balanced_matrices(egoistic, altruistic, weights):
    """``E_i + sum_{j != i} lam[j, i] A[j, i]`` for every link.

    Parameters
    ----------
    egoistic : ndarray, shape (N_c, N_t, N_t)
    altruistic : ndarray, shape (N_c, N_c, N_t, N_t)
        ``altruistic[j, i] = A_ji``.
    weights : ndarray, shape (N_c, N_c)
        ``weights[j, i] = lam_ji``; the diagonal is ignored.
    """
    lam = np.array(weights, dtype=float)
    np.fill_diagonal(lam, 0.0)
    return egoistic + np.einsum("ji,jiab->iab", lam, altruistic)


def balanced_response(egoistic, altruistic, weights):
    """Dominant eigenvector of ``E + sum_k lam_k A_k`` for one transmitter.

    "Dominant" means largest algebraic eigenvalue; the matrix is usually
    indefinite since the weights are non-positive.

    Parameters
    ----------
    egoistic : array_like, shape (n, n)
    altruistic : array_like, shape (m, n, n)
        The matrices ``A_ji`` for the ``m`` other receivers.
    weights : array_like, shape (m,)

    Returns
    -------
    w : ndarray, shape (n,)
        Unit vector in canonical phase.
    mu : float
        The associated eigenvalue (the Lagrange multiplier of the unit-norm
        constraint).
    """
    E = np.asarray(egoistic)
    A = np.asarray(altruistic)
    if A.ndim == 2:
        A = A[None]
    lam = np.asarray(weights, dtype=float).reshape(-1)
    if E.ndim != 2 or A.ndim != 3 or A.shape[1:] != E.shape or lam.size != A.shape[0]:
        raise DimensionError(
            f"incompatible shapes: E {E.shape}, A {A.shape}, weights {lam.shape}"
        )
    B = E + np.einsum("k,kab->ab", lam, A)
    w, mu = dominant_eigenvector(B, return_eigenvalue=True)
    return w, float(mu)
