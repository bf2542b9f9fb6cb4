"""
Dense complex linear algebra used by the beamformer construction.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Factorizations
are delegated to LAPACK through numpy/scipy; this module adds the
contracts the rest of the package relies on: descending eigenvalue order
with a fixed eigenvector phase, residual checks, pivot-based singularity
detection and a stable principal-angle measure.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (DependentInput, NonConvergence, RankDeficient,
                     SingularMatrix, ZeroVector)

__all__ = ['EigenPair', 'as_matrix', 'eig', 'eig_arrays', 'fix_phase',
           'inverse', 'singular_values', 'cond_number', 'gram_schmidt',
           'numerical_rank', 'collinearity_residual', 'svd', 'null_vector',
           'FactorizationMeter', 'METER', 'DEFAULT_TOL']

DEFAULT_TOL = 1e-8
SINGULAR_PIVOT_TOL = 1e-12
RANK_DEFICIENT_TOL = 1e-12
DEPENDENT_TOL = 1e-12


@dataclass(frozen=True)
class EigenPair:
    """One eigenvalue with its unit-norm, phase-normalized eigenvector."""
    value: complex
    vector: np.ndarray


def as_matrix(a, square=False):
    """Return `a` as a finite 2-D complex array, raising ValueError otherwise."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def fix_phase(vectors):
    """Rotate each column so its largest-magnitude entry is real positive.

    Works on a single vector or on the columns of a (possibly stacked)
    matrix. Ties in magnitude resolve to the first such entry.
    """
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        k = np.argmax(np.abs(v))
        return v * (abs(v[k]) / v[k]) if v[k] != 0 else v.copy()
    k = np.argmax(np.abs(v), axis=-2)
    pivot = np.take_along_axis(v, k[..., None, :], axis=-2)
    mag = np.abs(pivot)
    phase = np.where(mag > 0, mag / np.where(mag > 0, pivot, 1), 1)
    return v * phase


def eig_arrays(a, tol=DEFAULT_TOL):
    """Eigen-decomposition as arrays.

    Returns ``(values, vectors)`` with eigenvalues sorted by descending
    magnitude (stable for ties) and eigenvectors as unit-norm columns with
    the phase convention of `fix_phase`.

    Raises
    ------
    NonConvergence
        If LAPACK fails or any pair has ``||A v - l v|| > tol * ||A||_F``.
    """
    a = as_matrix(a, square=True)
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"eigenvalue iteration failed: {exc}") from exc
    order = np.argsort(-np.abs(values), kind='stable')
    values = values[order]
    vectors = vectors[:, order]
    vectors = vectors / np.linalg.norm(vectors, axis=0)
    vectors = fix_phase(vectors)

    scale = np.linalg.norm(a)
    residual = np.linalg.norm(a @ vectors - vectors * values, axis=0).max()
    if residual > tol * max(scale, np.finfo(float).tiny):
        raise NonConvergence(
            f"eigen residual {residual:.3e} exceeds {tol:.1e}*||A||_F",
            residual=residual)
    return values, vectors


def eig(a, tol=DEFAULT_TOL):
    """Eigenpairs of a square complex matrix, largest magnitude first.

    >>> [p.value for p in eig(np.diag([2.0, -1.0]))]
    [(2+0j), (-1+0j)]
    """
    values, vectors = eig_arrays(a, tol)
    return [EigenPair(complex(values[k]), vectors[:, k].copy())
            for k in range(len(values))]


def inverse(a):
    """Inverse through partial-pivot LU.

    Raises `SingularMatrix` when a pivot magnitude is below
    ``1e-12 * ||A||_F``.
    """
    a = as_matrix(a, square=True)
    scale = np.linalg.norm(a)
    with warnings.catch_warnings():
        # singularity is reported below as SingularMatrix
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if scale == 0 or pivots.min() < SINGULAR_PIVOT_TOL * scale:
        raise SingularMatrix(
            f"pivot {pivots.min():.3e} below {SINGULAR_PIVOT_TOL:.0e}*||A||_F")
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0], dtype=complex),
                                 check_finite=False)


class FactorizationMeter:
    """Counts the matrices handed to `svd`; a stack of N counts as N."""

    def __init__(self):
        self.count = 0

    def charge(self, a):
        self.count += int(np.prod(np.shape(a)[:-2], dtype=np.int64))


METER = FactorizationMeter()


def svd(a, compute_uv=True, full_matrices=True):
    """`numpy.linalg.svd` on a matrix or stack, charged to `METER`."""
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    METER.charge(a)
    try:
        return np.linalg.svd(a, full_matrices=full_matrices, compute_uv=compute_uv)
    except np.linalg.LinAlgError as exc:
        raise NonConvergence(f"SVD did not converge: {exc}") from exc


def singular_values(a):
    """Singular values in descending order.

    Accepts a single matrix or a stack of shape ``(..., m, n)``.
    """
    return svd(a, compute_uv=False)


def null_vector(a):
    """Unit vector orthogonal to every column of a tall ``(..., m, m-1)``
    matrix, plus a flag marking rank-deficient inputs (whose orthogonal
    complement is more than one-dimensional)."""
    u, s, _ = svd(a)
    deficient = s[..., -1] < RANK_DEFICIENT_TOL * s[..., 0]
    return u[..., :, -1], deficient


def cond_number(a, strict=True):
    """Ratio of largest to smallest singular value.

    For a stack of matrices an array of condition numbers is returned.
    A matrix with ``sigma_min < 1e-12 * sigma_max`` is rank deficient: with
    ``strict=True`` that raises `RankDeficient`, otherwise its condition
    number is reported as ``inf``.
    """
    s = singular_values(a)
    smax = s[..., 0]
    smin = s[..., -1]
    deficient = smin < RANK_DEFICIENT_TOL * smax
    if np.any(deficient) and strict:
        raise RankDeficient("matrix is numerically rank deficient")
    with np.errstate(divide='ignore', invalid='ignore'):
        kappa = np.where(deficient, np.inf, smax / np.where(deficient, 1, smin))
    return float(kappa) if np.ndim(kappa) == 0 else kappa


def gram_schmidt(cols):
    """Orthonormalize columns by modified Gram-Schmidt with one
    re-orthogonalization pass.

    Parameters
    ----------
    cols : array_like
        Either a sequence of 1-D vectors, a matrix whose columns are the
        vectors, or a stack ``(..., m, n)`` of such matrices.

    Returns
    -------
    numpy.ndarray
        Matrix (or stack) with orthonormal columns spanning the same space,
        in input order.
    """
    if isinstance(cols, (list, tuple)):
        q = np.column_stack([np.asarray(c, dtype=complex) for c in cols])
    else:
        q = np.array(cols, dtype=complex)
    if q.ndim < 2:
        raise ValueError("need at least a 2-D array of column vectors")
    n = q.shape[-1]
    input_norm = np.linalg.norm(q, axis=-2)
    for k in range(n):
        v = q[..., :, k]
        for _ in range(2):
            for p in range(k):
                b = q[..., :, p]
                coef = np.sum(b.conj() * v, axis=-1, keepdims=True)
                v = v - coef * b
        norm = np.linalg.norm(v, axis=-1)
        if np.any(norm <= DEPENDENT_TOL * np.maximum(input_norm[..., k], 1e-300)):
            raise DependentInput(f"column {k} is dependent on its predecessors")
        q[..., :, k] = v / norm[..., None]
    return q


def numerical_rank(a, rel_tol=1e-6):
    """Number of singular values at or above ``rel_tol * sigma_max``."""
    if not 0 < rel_tol < 1:
        raise ValueError("rel_tol must lie in (0, 1)")
    s = singular_values(a)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s >= rel_tol * s[0]))


def collinearity_residual(u, v):
    """Sine of the principal angle between two complex vectors.

    Equals ``sqrt(1 - |u^H v|^2 / (|u|^2 |v|^2))`` but is computed from the
    projection residual, which stays accurate far below ``sqrt(eps)``.
    """
    u = np.asarray(u, dtype=complex).ravel()
    v = np.asarray(v, dtype=complex).ravel()
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise ZeroVector("collinearity of a zero vector is undefined")
    u = u / nu
    v = v / nv
    return float(min(1.0, np.linalg.norm(u - np.vdot(v, u) * v)))
