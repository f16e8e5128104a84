"""
Complex linear-algebra kernels shared by the rest of the package.

Every routine accepts a single matrix or a stack of matrices with shape
``(..., n, n)`` so that per-link quantities can be processed in one call.
Eigenvectors are returned in a canonical phase (the first component with
modulus above ``PHASE_THRESHOLD`` is real and positive) which makes the
iterative algorithms bit-reproducible.
"""

from typing import NamedTuple

import numpy as np

from .exceptions import DegenerateInputError, DimensionError, InvalidInputError

__all__ = [
    "HermitianEigenResult",
    "eig_hermitian",
    "dominant_eigenvector",
    "least_eigenvector",
    "canonicalize_phase",
    "projector_onto",
    "projector_orth",
    "sample_complex_gaussian",
    "random_unit_vectors",
    "chordal_distance",
]

PHASE_THRESHOLD = 1e-8
TIE_TOLERANCE = 1e-10


class HermitianEigenResult(NamedTuple):
    """Eigenvalues in ascending order and matching unit eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_square(A):
    A = np.asarray(A)
    if A.ndim < 2 or A.shape[-1] != A.shape[-2]:
        raise DimensionError(f"expected square matrix (..., n, n), got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError("matrix contains NaN or Inf entries")
    return A


def canonicalize_phase(vectors, axis=-1):
    """Rotate each vector so its first significant component is real positive.

    Parameters
    ----------
    vectors : ndarray
        Complex vectors laid out along `axis`.
    axis : int
        Axis holding the vector components.

    Returns
    -------
    ndarray
        Phase-rotated copy with the same shape.
    """
    x = np.moveaxis(np.asarray(vectors, dtype=complex), axis, -1)
    mag = np.abs(x)
    significant = mag > PHASE_THRESHOLD
    first = np.argmax(significant, axis=-1)
    pivot = np.take_along_axis(x, first[..., None], axis=-1)
    pmag = np.abs(pivot)
    phase = np.where(pmag > 0, pivot / np.where(pmag > 0, pmag, 1.0), 1.0)
    return np.moveaxis(x * np.conj(phase), -1, axis)


def eig_hermitian(A):
    """Eigendecomposition of a Hermitian matrix (or stack of them).

    The input is symmetrized as ``(A + A^H) / 2`` before decomposition.

    Parameters
    ----------
    A : array_like, shape (..., n, n)
        Hermitian matrix or stack.

    Returns
    -------
    HermitianEigenResult
        ``eigenvalues`` ascending with shape (..., n); ``eigenvectors`` with
        shape (..., n, n) holding unit columns in canonical phase.

    Raises
    ------
    DimensionError
        If the trailing two dimensions are not square.
    InvalidInputError
        If `A` has NaN or Inf entries.
    """
    A = _check_square(A).astype(complex, copy=False)
    H = 0.5 * (A + np.conj(np.swapaxes(A, -1, -2)))
    lam, U = np.linalg.eigh(H)
    return HermitianEigenResult(lam, canonicalize_phase(U, axis=-2))


def dominant_eigenvector(A, return_eigenvalue=False):
    """Unit eigenvector of the largest (algebraic) eigenvalue.

    When several eigenvalues tie with the maximum within ``TIE_TOLERANCE``
    (relative to the eigenvalue scale), the first tied column of the computed
    basis is returned.

    Parameters
    ----------
    A : array_like, shape (..., n, n)
        Hermitian matrix or stack.
    return_eigenvalue : bool
        Also return the corresponding eigenvalue.

    Returns
    -------
    vec : ndarray, shape (..., n)
    value : ndarray, shape (...), optional
    """
    lam, U = eig_hermitian(A)
    top = lam[..., -1:]
    tol = TIE_TOLERANCE * np.maximum(1.0, np.abs(top))
    idx = np.argmax(lam >= top - tol, axis=-1)
    vec = np.take_along_axis(U, idx[..., None, None], axis=-1)[..., 0]
    if return_eigenvalue:
        return vec, np.take_along_axis(lam, idx[..., None], axis=-1)[..., 0]
    return vec


def least_eigenvector(A, return_eigenvalue=False):
    """Unit eigenvector of the smallest eigenvalue (first computed column)."""
    lam, U = eig_hermitian(A)
    vec = U[..., :, 0]
    if return_eigenvalue:
        return vec, lam[..., 0]
    return vec


def _as_row(h):
    h = np.asarray(h, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(h)):
        raise InvalidInputError("vector contains NaN or Inf entries")
    nrm2 = np.vdot(h, h).real
    if nrm2 <= 0.0:
        raise DegenerateInputError("projector of the zero vector is undefined")
    return h, nrm2


def projector_onto(h):
    """Orthogonal projector ``h^H h / |h|^2`` onto the span of ``h^H``.

    `h` is treated as a row vector (a channel from a multi-antenna
    transmitter to a single-antenna receiver); the projector acts on
    column vectors in the transmit space.
    """
    h, nrm2 = _as_row(h)
    col = np.conj(h)
    return np.outer(col, np.conj(col)) / nrm2


def projector_orth(h):
    """Complementary projector ``I - projector_onto(h)``."""
    Pi = projector_onto(h)
    return np.eye(Pi.shape[0], dtype=complex) - Pi


def sample_complex_gaussian(rows, cols, rng, batch_shape=()):
    """Draw i.i.d. CN(0, 1) entries (each real component has variance 1/2).

    Parameters
    ----------
    rows, cols : int
        Matrix dimensions.
    rng : numpy.random.Generator
        Source of randomness; consumed, never reseeded.
    batch_shape : tuple of int
        Leading stack dimensions.

    Returns
    -------
    ndarray, shape batch_shape + (rows, cols)
    """
    shape = tuple(batch_shape) + (rows, cols)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    return (re + 1j * im) * np.sqrt(0.5)


def random_unit_vectors(n, rng, batch_shape=()):
    """Vectors drawn uniformly on the complex unit sphere of dimension `n`."""
    x = sample_complex_gaussian(n, 1, rng, batch_shape)[..., 0]
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def chordal_distance(a, b):
    """Phase-invariant distance ``sqrt(1 - |a^H b|^2)`` between unit vectors.

    Evaluated as ``|a - b (b^H a)|`` which equals the closed form for unit
    vectors but keeps full relative precision for nearly parallel inputs.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    ip = np.sum(np.conj(b) * a, axis=-1, keepdims=True)
    return np.linalg.norm(a - b * ip, axis=-1)
