"""Input validation helpers shared by every module.

All numeric data is carried as immutable ``numpy`` arrays in complex double
precision.  Validation happens once, at construction; downstream code can
then assume finite entries and consistent shapes.
"""

from __future__ import annotations

import numpy as np

from .errors import ShapeMismatchError, TooLargeError

#: Soft cap on matrix dimensions; these are dense desk-scale algorithms.
DEFAULT_MAX_DIM = 64

#: Entrywise bound below which imaginary parts are considered roundoff:
#: ``|imag| <= REAL_DEMOTION_TOL * (1 + |real|)``.
REAL_DEMOTION_TOL = 1e-10

_EPS = float(np.finfo(np.float64).eps)


def as_matrix(a, *, name: str = "matrix", max_dim: int = DEFAULT_MAX_DIM) -> np.ndarray:
    """Coerce ``a`` to a frozen 2-D complex128 array with finite entries."""
    arr = np.array(a, dtype=np.complex128, order="C")
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be 2-D, got shape {arr.shape}")
    if max_dim is not None and max(arr.shape, default=0) > max_dim:
        raise TooLargeError(
            f"{name} has shape {arr.shape}; the dense-solver cap is {max_dim} "
            "(raise max_dim to override)"
        )
    _require_finite(arr, name)
    arr.flags.writeable = False
    return arr


def as_vector(a, *, name: str = "vector", dim: int | None = None) -> np.ndarray:
    """Coerce ``a`` to a frozen 1-D complex128 array with finite entries."""
    arr = np.array(a, dtype=np.complex128, order="C")
    if arr.ndim != 1:
        raise ShapeMismatchError(f"{name} must be 1-D, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ShapeMismatchError(f"{name} must have length {dim}, got {arr.shape[0]}")
    _require_finite(arr, name)
    arr.flags.writeable = False
    return arr


def _require_finite(arr: np.ndarray, name: str) -> None:
    if arr.size and not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
        raise ValueError(f"{name} contains non-finite entries")


def require_square(arr: np.ndarray, name: str = "matrix") -> None:
    if arr.shape[0] != arr.shape[1]:
        raise ShapeMismatchError(f"{name} must be square, got shape {arr.shape}")


def require_same_shape(a: np.ndarray, b: np.ndarray, names: str = "F, G") -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{names} must share a shape, got {a.shape} and {b.shape}")


def default_tolerance(a: np.ndarray, singular_values: np.ndarray | None = None) -> float:
    """Rank/singularity threshold: ``max(rows, cols) * eps * scale``.

    ``scale`` is the largest singular value when available, otherwise the
    largest column norm.  Zero matrices get a strictly positive floor so the
    threshold stays usable as an absolute cutoff.
    """
    if a.size == 0:
        return _EPS
    if singular_values is not None and len(singular_values):
        scale = float(singular_values[0])
    else:
        scale = float(np.max(np.linalg.norm(a, axis=0))) if a.ndim == 2 else float(np.max(np.abs(a)))
    return max(a.shape) * _EPS * max(scale, _EPS)


def demote_real(arr: np.ndarray, tol: float = REAL_DEMOTION_TOL) -> np.ndarray:
    """Return a real view of ``arr`` when every imaginary part is roundoff.

    An entry is demotable when ``|imag| <= tol * (1 + |real|)``; the array is
    demoted only if every entry qualifies, otherwise it is returned unchanged.
    """
    arr = np.asarray(arr)
    if not np.iscomplexobj(arr):
        return arr
    if arr.size == 0 or np.all(np.abs(arr.imag) <= tol * (1.0 + np.abs(arr.real))):
        out = np.ascontiguousarray(arr.real)
        out.flags.writeable = False
        return out
    return arr


def demote_scalar(value: complex, tol: float = REAL_DEMOTION_TOL) -> complex | float:
    """Scalar analogue of :func:`demote_real`."""
    value = complex(value)
    if abs(value.imag) <= tol * (1.0 + abs(value.real)):
        return value.real
    return value


def condition_estimate(a: np.ndarray) -> float:
    """2-norm condition number via SVD; ``inf`` when numerically singular."""
    if a.size == 0:
        return 1.0
    s = np.linalg.svd(a, compute_uv=False)
    smin = float(s[-1])
    if smin <= 0.0:
        return float("inf")
    return float(s[0]) / smin
