import numpy as np
import pytest

from cobeam.exceptions import DegenerateInputError, DimensionError, InvalidInputError
from cobeam.numerics import (
    canonicalize_phase,
    chordal_distance,
    dominant_eigenvector,
    eig_hermitian,
    least_eigenvector,
    projector_onto,
    projector_orth,
    random_unit_vectors,
    sample_complex_gaussian,
)


def random_hermitian(rng, n, batch=()):
    X = sample_complex_gaussian(n, n, rng, batch)
    return X + np.conj(np.swapaxes(X, -1, -2))


class TestEigHermitian:
    def test_reconstruction_and_order(self, rng):
        A = random_hermitian(rng, 4)
        lam, U = eig_hermitian(A)
        assert np.all(np.diff(lam) >= 0)
        np.testing.assert_allclose(U @ np.diag(lam) @ U.conj().T, A, atol=1e-12)
        np.testing.assert_allclose(U.conj().T @ U, np.eye(4), atol=1e-12)

    def test_canonical_phase(self, rng):
        _, U = eig_hermitian(random_hermitian(rng, 3))
        first = U[0]
        assert np.all(np.abs(first.imag) < 1e-15)
        assert np.all(first.real > 0)

    def test_stacked(self, rng):
        A = random_hermitian(rng, 3, (2, 5))
        lam, U = eig_hermitian(A)
        assert lam.shape == (2, 5, 3) and U.shape == (2, 5, 3, 3)
        lam0, _ = eig_hermitian(A[1, 3])
        np.testing.assert_allclose(lam[1, 3], lam0, atol=1e-13)

    def test_symmetrizes_input(self, rng):
        A = random_hermitian(rng, 3)
        skew = 1e-9 * (np.triu(np.ones((3, 3)), 1))
        np.testing.assert_allclose(eig_hermitian(A + skew)[0], eig_hermitian(A + 0.5 * (skew + skew.T))[0])

    def test_rejects_bad_input(self):
        with pytest.raises(DimensionError):
            eig_hermitian(np.zeros((2, 3)))
        with pytest.raises(DimensionError):
            eig_hermitian(np.zeros(3))
        with pytest.raises(InvalidInputError):
            eig_hermitian(np.array([[1.0, np.nan], [np.nan, 1.0]]))


class TestExtremeEigenvectors:
    def test_dominant_is_largest_algebraic(self):
        A = np.diag([-5.0, 1.0, 0.5])
        w, mu = dominant_eigenvector(A, return_eigenvalue=True)
        np.testing.assert_allclose(np.abs(w), [0, 1, 0], atol=1e-15)
        assert mu == pytest.approx(1.0)

    def test_least(self):
        w, mu = least_eigenvector(np.diag([2.0, -3.0, 1.0]), return_eigenvalue=True)
        np.testing.assert_allclose(np.abs(w), [0, 1, 0], atol=1e-15)
        assert mu == pytest.approx(-3.0)

    def test_tie_returns_first_tied_column(self):
        A = np.diag([1.0, 4.0, 4.0])
        _, U = eig_hermitian(A)
        np.testing.assert_allclose(dominant_eigenvector(A), U[:, 1])

    def test_rayleigh_quotient_bounds(self, rng):
        A = random_hermitian(rng, 4)
        w = dominant_eigenvector(A)
        x = random_unit_vectors(4, rng, (2000,))
        q = np.einsum("ka,ab,kb->k", x.conj(), A, x).real
        assert np.vdot(w, A @ w).real >= q.max() - 1e-12
        u = least_eigenvector(A)
        assert np.vdot(u, A @ u).real <= q.min() + 1e-12

    def test_stacked_matches_loop(self, rng):
        A = random_hermitian(rng, 3, (4,))
        W = dominant_eigenvector(A)
        for k in range(4):
            np.testing.assert_allclose(W[k], dominant_eigenvector(A[k]), atol=1e-14)


def test_canonicalize_phase_skips_negligible_leading_entries():
    v = np.array([1e-12, 1j, 1.0]) / np.sqrt(2)
    out = canonicalize_phase(v)
    assert out[1] == pytest.approx(1 / np.sqrt(2))
    assert abs(out[0]) == pytest.approx(abs(v[0]))


class TestProjectors:
    def test_properties(self, rng):
        h = sample_complex_gaussian(1, 3, rng)[0]
        Pi = projector_onto(h)
        np.testing.assert_allclose(Pi @ Pi, Pi, atol=1e-14)
        np.testing.assert_allclose(Pi, Pi.conj().T, atol=1e-15)
        assert np.trace(Pi).real == pytest.approx(1.0)
        np.testing.assert_allclose(Pi @ h.conj(), h.conj(), atol=1e-14)
        Po = projector_orth(h)
        np.testing.assert_allclose(h @ Po, 0, atol=1e-14)
        np.testing.assert_allclose(Pi + Po, np.eye(3), atol=1e-15)

    def test_zero_vector(self):
        with pytest.raises(DegenerateInputError):
            projector_onto(np.zeros(3))
        with pytest.raises(InvalidInputError):
            projector_orth(np.array([np.inf, 1.0]))


class TestSampling:
    def test_component_variance(self):
        x = sample_complex_gaussian(2, 2, np.random.default_rng(0), (50000,))
        # 4 * 50000 draws per component: 5 standard errors of the variance
        np.testing.assert_allclose(x.real.var(), 0.5, atol=5 * 0.5 * np.sqrt(2 / 2e5))
        np.testing.assert_allclose(x.imag.var(), 0.5, atol=5 * 0.5 * np.sqrt(2 / 2e5))
        assert abs(np.mean(x.real * x.imag)) < 0.01

    def test_deterministic(self):
        a = sample_complex_gaussian(3, 2, np.random.default_rng(7), (4,))
        b = sample_complex_gaussian(3, 2, np.random.default_rng(7), (4,))
        assert a.shape == (4, 3, 2)
        np.testing.assert_array_equal(a, b)

    def test_unit_vectors(self):
        x = random_unit_vectors(3, np.random.default_rng(1), (20000,))
        np.testing.assert_allclose(np.linalg.norm(x, axis=-1), 1.0, atol=1e-14)
        np.testing.assert_allclose(np.mean(np.abs(x) ** 2, axis=0), 1 / 3, atol=0.01)


class TestChordalDistance:
    def test_known_values(self):
        e1, e2 = np.array([1, 0j]), np.array([0, 1 + 0j])
        assert chordal_distance(e1, e1) == 0.0
        assert chordal_distance(e1, e2) == pytest.approx(1.0)
        assert chordal_distance(e1, np.array([1, 1]) / np.sqrt(2)) == pytest.approx(np.sqrt(0.5))

    def test_phase_invariant_and_closed_form(self, rng):
        a, b = random_unit_vectors(4, rng, (2,))
        d = chordal_distance(a, b)
        assert d == pytest.approx(np.sqrt(1 - abs(np.vdot(a, b)) ** 2), rel=1e-12)
        assert chordal_distance(a * np.exp(0.7j), b * np.exp(-2j)) == pytest.approx(d, rel=1e-12)

    def test_precision_near_parallel(self, rng):
        b = random_unit_vectors(3, rng)
        perp = random_unit_vectors(3, rng)
        perp -= b * np.vdot(b, perp)
        perp /= np.linalg.norm(perp)
        eps = 1e-11
        a = (b + eps * perp) / np.sqrt(1 + eps**2)
        assert chordal_distance(a, b) == pytest.approx(eps, rel=1e-4)
