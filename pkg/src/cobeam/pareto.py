"""
Pareto boundary of the two-link MISO interference channel.

Each transmitter's beamformer is parametrized by the fraction ``zeta`` of
power sent along the projection of its direct channel onto the channel it
leaks through:

    w_1 = sqrt(zeta_1) u_1 + sqrt(1 - zeta_1) u_1_perp

with ``u_1 ∝ Pi_12 h11^H`` and ``u_1_perp ∝ Pi_12^perp h11^H``. ``zeta = 0``
is zero forcing and ``zeta = a / (a + b)`` is maximum-ratio transmission.

Channel naming in this module: ``h11``/``h22`` are the direct channels,
``h12`` is the channel from Tx 1 to Rx 2 (the one Tx 1 leaks through) and
``h21`` the channel from Tx 2 to Rx 1. Received SINRs use unit noise and
transmit SNR ``rho``:

    gamma_1 = rho |h11 w_1|^2 / (1 + rho |h21 w_2|^2)
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import bisect
from scipy.special import expit

from .exceptions import DegenerateInputError, DimensionError, InvalidInputError
from .network import ChannelSet
from .numerics import projector_onto, projector_orth
from .strategies import BeamformerProfile

logger = logging.getLogger(__name__)

__all__ = [
    "MisoScenario",
    "ZetaCoefficients",
    "ParetoPoint",
    "BoundarySolution",
    "zeta_coefficients",
    "zeta_beamformer",
    "zeta_profile",
    "zeta_sinrs",
    "sinr_partials",
    "boundary_balance",
    "pareto_conditions",
    "solve_boundary",
    "random_miso_scenario",
]

SCAN_INTERVALS = 512
ROOT_XTOL = 1e-12
LOGIT_SPAN = 30.0
_DEGENERATE = 1e-14


@dataclass(frozen=True, eq=False)
class MisoScenario:
    h11: np.ndarray
    h12: np.ndarray
    h21: np.ndarray
    h22: np.ndarray
    rho: float

    def __post_init__(self):
        vecs = []
        for name in ("h11", "h12", "h21", "h22"):
            h = np.asarray(getattr(self, name), dtype=complex).reshape(-1)
            if not np.all(np.isfinite(h)):
                raise InvalidInputError(f"{name} has NaN/Inf entries")
            if np.linalg.norm(h) == 0.0:
                raise DegenerateInputError(f"{name} is the zero vector")
            object.__setattr__(self, name, h)
            vecs.append(h)
        if len({v.size for v in vecs}) != 1:
            raise DimensionError("all channel vectors must have the same length")
        if not self.rho > 0:
            raise InvalidInputError("rho must be > 0")

    @property
    def n_tx(self):
        return self.h11.size

    def direct(self, link):
        return self.h11 if link == 0 else self.h22

    def leak(self, link):
        """Channel transmitter `link` leaks through (towards the other Rx)."""
        return self.h12 if link == 0 else self.h21

    def to_channel_set(self):
        """Equivalent general network: N_r = 1, ``P = rho``, unit noise."""
        ch = np.empty((2, 2, 1, self.n_tx), dtype=complex)
        ch[0, 0, 0] = self.h11
        ch[1, 1, 0] = self.h22
        ch[1, 0, 0] = self.h12  # Tx 1 -> Rx 2
        ch[0, 1, 0] = self.h21  # Tx 2 -> Rx 1
        return ChannelSet(ch, np.ones((2, 2)), np.ones(2), float(self.rho))


@dataclass(frozen=True)
class ZetaCoefficients:
    a1: float
    b1: float
    a2: float
    b2: float
    c1: float
    c2: float
    rho: float

    @property
    def zeta_max_1(self):
        return self.a1 / (self.a1 + self.b1)

    @property
    def zeta_max_2(self):
        return self.a2 / (self.a2 + self.b2)

    def zeta_max(self, link):
        return self.zeta_max_1 if link == 0 else self.zeta_max_2


@dataclass(frozen=True)
class ParetoPoint:
    zeta1: float
    zeta2: float
    gamma1: float
    gamma2: float

    @property
    def rates(self):
        return np.log2(1.0 + self.gamma1), np.log2(1.0 + self.gamma2)


@dataclass
class BoundarySolution:
    """Sampled boundary plus bookkeeping of skipped grid values."""

    points: list
    skipped: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, idx):
        return self.points[idx]

    def as_array(self):
        """Rows ``(zeta1, zeta2, gamma1, gamma2)``."""
        return np.array([[p.zeta1, p.zeta2, p.gamma1, p.gamma2] for p in self.points]).reshape(-1, 4)


def zeta_coefficients(scenario):
    """Projection powers ``a_i``, ``b_i`` and scaled leak powers ``c_i``.

    ``a_1 = |Pi_12 h11^H|^2``, ``b_1 = |Pi_12^perp h11^H|^2``,
    ``c_1 = rho |h12|^2``; link 2 likewise with ``h22`` and ``h21``.
    """
    coeffs = []
    for link in (0, 1):
        h = scenario.direct(link)
        g = scenario.leak(link)
        a = float(np.linalg.norm(projector_onto(g) @ np.conj(h)) ** 2)
        b = float(np.linalg.norm(projector_orth(g) @ np.conj(h)) ** 2)
        coeffs.append((a, b, scenario.rho * float(np.vdot(g, g).real)))
    (a1, b1, c1), (a2, b2, c2) = coeffs
    return ZetaCoefficients(a1=a1, b1=b1, a2=a2, b2=b2, c1=c1, c2=c2, rho=float(scenario.rho))


def _basis(scenario, link):
    """Unit vectors along ``Pi h^H`` and ``Pi^perp h^H`` for one transmitter.

    Degenerate projections fall back to a direction with the same span
    (``g^H`` itself, or any vector orthogonal to it) so the closed forms keep
    holding with ``a = 0`` or ``b = 0``.
    """
    h = np.conj(scenario.direct(link))
    g = scenario.leak(link)
    along = projector_onto(g) @ h
    perp = projector_orth(g) @ h
    na, nb = np.linalg.norm(along), np.linalg.norm(perp)
    scale = np.linalg.norm(h)
    if na > _DEGENERATE * scale:
        u = along / na
    else:
        u = np.conj(g) / np.linalg.norm(g)
    if nb > _DEGENERATE * scale:
        u_perp = perp / nb
    else:
        if scenario.n_tx < 2:
            raise DegenerateInputError("no zero-forcing direction with a single antenna")
        Pperp = projector_orth(g)
        k = int(np.argmax(np.real(np.diag(Pperp))))
        u_perp = Pperp[:, k] / np.linalg.norm(Pperp[:, k])
    return u, u_perp


def zeta_beamformer(scenario, link, zeta):
    """Unit transmit vector of `link` (0 or 1) for power fraction `zeta`."""
    if not 0.0 <= zeta <= 1.0:
        raise ValueError(f"zeta must lie in [0, 1], got {zeta}")
    u, u_perp = _basis(scenario, link)
    return np.sqrt(zeta) * u + np.sqrt(1.0 - zeta) * u_perp


def zeta_profile(scenario, zeta1, zeta2):
    """Full-network profile (scalar receivers) for a ``(zeta1, zeta2)`` pair."""
    tx = np.stack([zeta_beamformer(scenario, 0, zeta1), zeta_beamformer(scenario, 1, zeta2)])
    return BeamformerProfile(tx, np.ones((2, 1)))


def _signal_root(a, b, zeta):
    return np.sqrt(a * zeta) + np.sqrt(b * (1.0 - zeta))


def zeta_sinrs(coeffs, zeta1, zeta2):
    """Closed-form SINRs; broadcasts over array inputs.

    ``gamma_1 = rho s_1^2 / (1 + zeta_2 c_2)`` with
    ``s_1 = sqrt(a_1 zeta_1) + sqrt(b_1 (1 - zeta_1))``.
    """
    z1 = np.asarray(zeta1, dtype=float)
    z2 = np.asarray(zeta2, dtype=float)
    rho = coeffs.rho
    g1 = rho * _signal_root(coeffs.a1, coeffs.b1, z1) ** 2 / (1.0 + z2 * coeffs.c2)
    g2 = rho * _signal_root(coeffs.a2, coeffs.b2, z2) ** 2 / (1.0 + z1 * coeffs.c1)
    return g1, g2


def _check_open(zeta1, zeta2):
    if not (0.0 < zeta1 < 1.0 and 0.0 < zeta2 < 1.0):
        raise ValueError(f"zeta values must lie strictly inside (0, 1): {zeta1}, {zeta2}")


def _slope_term(a, b, zeta):
    # d(s^2)/dzeta = s * D
    return np.sqrt(a) / np.sqrt(zeta) - np.sqrt(b) / np.sqrt(1.0 - zeta)


def sinr_partials(coeffs, zeta1, zeta2):
    """Partial derivatives ``(dg1/dz1, dg1/dz2, dg2/dz1, dg2/dz2)``.

    Raises
    ------
    ValueError
        At the endpoints, where ``1/sqrt(zeta)`` is singular.
    """
    _check_open(zeta1, zeta2)
    rho = coeffs.rho
    s1 = _signal_root(coeffs.a1, coeffs.b1, zeta1)
    s2 = _signal_root(coeffs.a2, coeffs.b2, zeta2)
    d1 = _slope_term(coeffs.a1, coeffs.b1, zeta1)
    d2 = _slope_term(coeffs.a2, coeffs.b2, zeta2)
    den1 = 1.0 + zeta2 * coeffs.c2
    den2 = 1.0 + zeta1 * coeffs.c1
    dg1_dz1 = rho * s1 * d1 / den1
    dg1_dz2 = -rho * coeffs.c2 * s1**2 / den1**2
    dg2_dz2 = rho * s2 * d2 / den2
    dg2_dz1 = -rho * coeffs.c1 * s2**2 / den2**2
    return dg1_dz1, dg1_dz2, dg2_dz1, dg2_dz2


def _lhs(coeffs, zeta1):
    s1 = _signal_root(coeffs.a1, coeffs.b1, zeta1)
    d1 = _slope_term(coeffs.a1, coeffs.b1, zeta1)
    return d1 * (1.0 + zeta1 * coeffs.c1) / (coeffs.c1 * s1)


def _rhs(coeffs, zeta2):
    s2 = _signal_root(coeffs.a2, coeffs.b2, zeta2)
    d2 = _slope_term(coeffs.a2, coeffs.b2, zeta2)
    return s2 * coeffs.c2 / (d2 * (1.0 + zeta2 * coeffs.c2))


def boundary_balance(coeffs, zeta1, zeta2):
    """``L(zeta1) - R(zeta2)``; zero where the SINR gradients are anti-parallel.

    ``L = D_1 (1 + zeta_1 c_1) / (c_1 s_1)`` and
    ``R = s_2 c_2 / (D_2 (1 + zeta_2 c_2))`` with
    ``D_i = sqrt(a_i)/sqrt(zeta_i) - sqrt(b_i)/sqrt(1 - zeta_i)``. ``R`` is
    infinite at ``zeta_2 = zeta_max_2`` where ``D_2`` vanishes.
    """
    _check_open(zeta1, zeta2)
    with np.errstate(divide="ignore"):
        return float(_lhs(coeffs, zeta1) - _rhs(coeffs, zeta2))


def pareto_conditions(coeffs, zeta1, zeta2, tol=1e-7):
    """First-order Pareto test at an interior point.

    Returns ``True`` when no perturbation ``(delta_1, delta_2)`` raises both
    SINRs to first order. In two dimensions this holds exactly when the
    gradients of ``gamma_1`` and ``gamma_2`` point in opposite directions
    (or one of them vanishes); `tol` bounds the sine of the angle between
    them.
    """
    g11, g12, g21, g22 = sinr_partials(coeffs, zeta1, zeta2)
    grad1 = np.array([g11, g12])
    grad2 = np.array([g21, g22])
    n1, n2 = np.linalg.norm(grad1), np.linalg.norm(grad2)
    if n1 == 0.0 or n2 == 0.0:
        return True
    sine = abs(g11 * g22 - g12 * g21) / (n1 * n2)
    return bool(grad1 @ grad2 < 0 and sine <= tol)


def _non_dominated(points):
    g = np.array([[p.gamma1, p.gamma2] for p in points]).reshape(-1, 2)
    keep = []
    for k, p in enumerate(points):
        ge = np.all(g >= g[k], axis=1)
        gt = np.any(g > g[k], axis=1)
        if not np.any(ge & gt):
            keep.append(p)
    return keep


def _degenerate_boundary(coeffs, n_points, fixed_link):
    # a_i = 0: that transmitter's only efficient choice is zeta_i = 0, so the
    # boundary is traced by the other transmitter's zeta alone.
    other_max = coeffs.zeta_max(1 - fixed_link)
    grid = np.linspace(0.0, other_max, n_points)
    pts = []
    for z in grid:
        z1, z2 = (0.0, z) if fixed_link == 0 else (z, 0.0)
        g1, g2 = zeta_sinrs(coeffs, z1, z2)
        pts.append(ParetoPoint(float(z1), float(z2), float(g1), float(g2)))
    return pts


def solve_boundary(scenario, n_points=64, filter_dominated=True):
    """Sample the Pareto boundary by solving ``L(zeta1) = R(zeta2)``.

    For each ``zeta1`` on an interior grid of ``(0, zeta_max_1)`` every sign
    change of the balance in ``zeta2`` over ``SCAN_INTERVALS`` subintervals
    is refined by bisection. The scan is uniform in ``logit(zeta2 /
    zeta_max_2)`` over ``[-LOGIT_SPAN, LOGIT_SPAN]`` and bisection runs in
    that variable to ``ROOT_XTOL``, i.e. to a relative precision in
    ``zeta2`` near both ends of the interval. Roots failing the first-order
    Pareto test are dropped; with `filter_dominated` the remaining set is
    reduced to its non-dominated subset (the balance functions need not be
    monotone, so local folds can appear).

    Parameters
    ----------
    scenario : MisoScenario
    n_points : int
        Number of ``zeta1`` grid values (>= 2).

    Returns
    -------
    BoundarySolution
    """
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    coeffs = zeta_coefficients(scenario)
    solution = BoundarySolution(points=[])
    for link, a in ((0, coeffs.a1), (1, coeffs.a2)):
        if a <= _DEGENERATE * np.linalg.norm(scenario.direct(link)) ** 2:
            msg = f"link {link + 1} cannot project onto its leak channel; zeta interval collapses"
            logger.warning(msg)
            solution.warnings.append(msg)
            solution.points = _degenerate_boundary(coeffs, n_points, link)
            return solution

    z1m, z2m = coeffs.zeta_max_1, coeffs.zeta_max_2
    if z2m >= 1.0:
        # b_2 = 0: R stays finite up to 1, scan the whole open interval
        z2m = 1.0
    zeta1_grid = np.linspace(0.0, z1m, n_points + 2)[1:-1]
    # logit-spaced scan: the roots crowd towards zeta2 -> 0 at high rho
    x_grid = np.linspace(-LOGIT_SPAN, LOGIT_SPAN, SCAN_INTERVALS + 1)

    def zeta2_of(x):
        return z2m * expit(x)

    rhs = np.array([_rhs(coeffs, zeta2_of(x)) for x in x_grid])

    found = []
    for z1 in zeta1_grid:
        lhs = _lhs(coeffs, z1)
        f = lhs - rhs
        crossings = np.nonzero(np.sign(f[:-1]) * np.sign(f[1:]) <= 0)[0]
        roots = []
        for k in crossings:
            if f[k] == 0.0:
                roots.append(zeta2_of(x_grid[k]))
                continue
            if not (np.isfinite(f[k]) and np.isfinite(f[k + 1])):
                continue
            x = bisect(lambda t: lhs - _rhs(coeffs, zeta2_of(t)), x_grid[k], x_grid[k + 1], xtol=ROOT_XTOL)
            roots.append(zeta2_of(x))
        if not roots:
            solution.skipped.append(float(z1))
            continue
        for z2 in roots:
            if not pareto_conditions(coeffs, z1, z2):
                continue
            g1, g2 = zeta_sinrs(coeffs, z1, z2)
            found.append(ParetoPoint(float(z1), float(z2), float(g1), float(g2)))
    solution.points = _non_dominated(found) if filter_dominated else found
    return solution


def random_miso_scenario(n_tx, rho, rng):
    """Four i.i.d. CN(0, 1) row channels."""
    h = (rng.standard_normal((4, n_tx)) + 1j * rng.standard_normal((4, n_tx))) * np.sqrt(0.5)
    return MisoScenario(h[0], h[1], h[2], h[3], rho)
