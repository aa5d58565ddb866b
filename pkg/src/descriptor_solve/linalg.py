"""Dense numerical primitives with fixed contracts.

Thin facade over LAPACK (through ``numpy``/``scipy``) so that every caller in
this package sees the same tolerance conventions, the same error types, and
deterministic behaviour: identical inputs give identical outputs on a given
platform.  All arithmetic is complex double precision; callers demote to real
at their API boundaries.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import (
    EigenConvergenceError,
    RankDeficientError,
    ShapeMismatchError,
    SingularMatrixError,
    TooLargeError,
    ZeroPolynomialError,
)
from .validation import DEFAULT_MAX_DIM, as_matrix, as_vector, default_tolerance, require_square


def qr_least_squares(a, b, *, tol: float | None = None) -> np.ndarray:
    """Solve ``min ||a x - b||_2`` for a full-column-rank ``a``.

    Uses a Householder QR factorisation; the residual ``b - a x`` is
    orthogonal to the column span of ``a`` up to roundoff.

    Raises
    ------
    RankDeficientError
        If the numerical column rank of ``a`` is below its column count at
        ``tol`` (default: the rank-revealing convention of
        :func:`~descriptor_solve.validation.default_tolerance`).
    """
    a = as_matrix(a, name="a", max_dim=None)
    b = as_vector(b, name="b", dim=a.shape[0])
    n, k = a.shape
    if n < k:
        raise ShapeMismatchError(f"need rows >= cols for least squares, got {a.shape}")
    if k == 0:
        return np.zeros(0, dtype=np.complex128)
    s = np.linalg.svd(a, compute_uv=False)
    cutoff = default_tolerance(a, s) if tol is None else tol
    if s[-1] <= cutoff:
        raise RankDeficientError(
            f"column rank < {k} at tolerance {cutoff:.3e} (smallest singular value {s[-1]:.3e})"
        )
    q, r = np.linalg.qr(a)
    return scipy.linalg.solve_triangular(r, q.conj().T @ b)


def solve_square(a, b, *, tol: float | None = None) -> np.ndarray:
    """Solve ``a x = b`` for square, numerically invertible ``a``.

    ``b`` may be a vector or a matrix of stacked right-hand sides.

    Raises
    ------
    SingularMatrixError
        If the smallest singular value of ``a`` is at or below
        ``tol * largest`` (default ``max(shape) * eps``).
    """
    a = as_matrix(a, name="a", max_dim=None)
    require_square(a, "a")
    b_arr = np.asarray(b, dtype=np.complex128)
    expected = a.shape[0]
    if b_arr.shape[:1] != (expected,):
        raise ShapeMismatchError(f"rhs must have {expected} rows, got shape {b_arr.shape}")
    if a.size == 0:
        return np.zeros_like(b_arr)
    s = np.linalg.svd(a, compute_uv=False)
    rel = max(a.shape) * np.finfo(np.float64).eps if tol is None else tol
    if s[-1] <= rel * s[0] or s[0] == 0.0:
        raise SingularMatrixError(
            f"matrix numerically singular: sigma_min/sigma_max = {s[-1]:.3e}/{s[0]:.3e}"
        )
    return scipy.linalg.solve(a, b_arr)


def orthonormal_range(a, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of the numerical column span of ``a``.

    Returns an ``(m, r)`` matrix with ``r`` the numerical rank at ``tol``;
    the zero matrix yields a zero-column result.
    """
    a = as_matrix(a, name="a", max_dim=None)
    if a.size == 0:
        return np.zeros((a.shape[0], 0), dtype=np.complex128)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    cutoff = default_tolerance(a, s) if tol is None else tol
    rank = int(np.sum(s > cutoff))
    return u[:, :rank]


def eigen_decompose(a, *, max_dim: int = DEFAULT_MAX_DIM) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and right eigenvectors of a square matrix.

    The eigenvalue array always has ``dim`` entries, so algebraic
    multiplicities sum to the dimension by construction.

    Raises
    ------
    EigenConvergenceError
        If the QR iteration exhausts its budget without converging.
    """
    a = as_matrix(a, name="a", max_dim=None)
    require_square(a, "a")
    if max(a.shape, default=0) > max_dim:
        raise TooLargeError(f"matrix of shape {a.shape} exceeds the eigen-solver cap {max_dim}")
    if a.size == 0:
        return np.zeros(0, dtype=np.complex128), np.zeros((0, 0), dtype=np.complex128)
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK budget exhausted
        raise EigenConvergenceError(str(exc)) from exc
    return values, vectors


def poly_roots(coeffs, *, tol: float | None = None) -> np.ndarray:
    """Roots (with multiplicity) of a polynomial given ascending coefficients.

    Computed as the eigenvalues of the companion matrix of the monic
    normalisation.  Trailing coefficients at or below ``tol`` (default
    ``len(coeffs) * eps * max|c|``) are treated as zero when determining the
    degree.

    Raises
    ------
    ZeroPolynomialError
        If every coefficient is at or below tolerance.
    """
    c = as_vector(coeffs, name="coeffs")
    if c.size == 0:
        raise ZeroPolynomialError("empty coefficient list")
    scale = float(np.max(np.abs(c)))
    cutoff = len(c) * np.finfo(np.float64).eps * scale if tol is None else tol
    if scale == 0.0 or np.all(np.abs(c) <= cutoff):
        raise ZeroPolynomialError("all polynomial coefficients below tolerance")
    degree = int(np.max(np.nonzero(np.abs(c) > cutoff)[0]))
    if degree == 0:
        return np.zeros(0, dtype=np.complex128)
    monic = c[: degree + 1] / c[degree]
    companion = np.zeros((degree, degree), dtype=np.complex128)
    if degree > 1:
        companion[1:, :-1] = np.eye(degree - 1)
    companion[:, -1] = -monic[:-1]
    try:
        roots = np.linalg.eigvals(companion)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise EigenConvergenceError(str(exc)) from exc
    order = np.lexsort((roots.imag, roots.real))
    return roots[order]
