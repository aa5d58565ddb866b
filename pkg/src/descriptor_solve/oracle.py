"""Independent brute-force verifiers.

These routines re-derive results checked elsewhere in the package from first
principles and deliberately share no code with the modules they verify: no
imports from the pencil, decomposition, or solver modules, and no reuse of
the numeric facade.  Duplication here is the point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatchError, TooLargeError

#: Cofactor expansion is factorial in the dimension; past this it is pointless.
MAX_EXACT_DET_DIM = 6


@dataclass(frozen=True)
class ResidualReport:
    """Per-step recursion residuals ``||F y[k+1] - G y[k] - v[k]||_inf``."""

    residuals: tuple[float, ...]
    max_residual: float
    tolerance: float
    passed: bool


def residual_check(F, G, inputs, trajectory, tol: float = 1e-8) -> ResidualReport:
    """Recompute every step residual of a trajectory by direct arithmetic.

    Parameters
    ----------
    F, G : array_like, shape (r, m)
        System matrices.
    inputs : array_like of shape (steps, r), or None
        Input sequence; ``None`` means identically zero.
    trajectory : array_like of shape (horizon + 1, m)
        States ``y[0] .. y[N]``; objects exposing a ``states`` attribute are
        accepted too.
    """
    F = np.asarray(F, dtype=np.complex128)
    G = np.asarray(G, dtype=np.complex128)
    states = np.asarray(getattr(trajectory, "states", trajectory), dtype=np.complex128)
    if F.ndim != 2 or F.shape != G.shape:
        raise ShapeMismatchError(f"F, G must share a 2-D shape, got {F.shape} and {G.shape}")
    if states.ndim != 2 or states.shape[1] != F.shape[1]:
        raise ShapeMismatchError(
            f"trajectory states must be (steps, {F.shape[1]}), got {states.shape}"
        )
    horizon = states.shape[0] - 1
    if inputs is None:
        V = np.zeros((horizon, F.shape[0]), dtype=np.complex128)
    else:
        V = np.asarray(inputs, dtype=np.complex128)
        if V.ndim != 2 or V.shape[1] != F.shape[0]:
            raise ShapeMismatchError(f"inputs must be (steps, {F.shape[0]}), got {V.shape}")
        if V.shape[0] < horizon:
            V = np.vstack([V, np.zeros((horizon - V.shape[0], F.shape[0]))])
    residuals = tuple(
        float(np.max(np.abs(F @ states[k + 1] - G @ states[k] - V[k]))) for k in range(horizon)
    )
    worst = max(residuals, default=0.0)
    return ResidualReport(
        residuals=residuals, max_residual=worst, tolerance=tol, passed=worst <= tol
    )


def det_poly_cofactor(F, G) -> np.ndarray:
    """Exact coefficients of ``det(s F - G)`` by symbolic cofactor expansion.

    Each entry is the degree-1 polynomial ``s F[i, j] - G[i, j]``; the
    expansion multiplies and adds coefficient arrays only, so the result is
    exact up to floating-point rounding of the products.  Ascending order,
    length ``m + 1``.

    Raises
    ------
    TooLargeError
        For matrices larger than 6x6 (factorial cost).
    """
    F = np.asarray(F, dtype=np.complex128)
    G = np.asarray(G, dtype=np.complex128)
    if F.ndim != 2 or F.shape != G.shape or F.shape[0] != F.shape[1]:
        raise ShapeMismatchError(f"need square matrices of equal shape, got {F.shape}, {G.shape}")
    m = F.shape[0]
    if m > MAX_EXACT_DET_DIM:
        raise TooLargeError(f"cofactor expansion capped at {MAX_EXACT_DET_DIM}x{MAX_EXACT_DET_DIM}")

    def expand(rows: list[int], cols: list[int]) -> np.ndarray:
        if not rows:
            return np.array([1.0 + 0.0j])
        i = rows[0]
        total = np.zeros(len(rows) + 1, dtype=np.complex128)
        for pos, j in enumerate(cols):
            entry = np.array([-G[i, j], F[i, j]])
            minor = expand(rows[1:], cols[:pos] + cols[pos + 1 :])
            term = np.convolve(entry, minor)
            sign = -1.0 if pos % 2 else 1.0
            total[: len(term)] += sign * term
        return total

    return expand(list(range(m)), list(range(m)))


def svd_projection_distance(basis, y) -> float:
    """Distance from ``y`` to the column span of ``basis``.

    Uses an SVD orthonormal factorisation of the basis; no normal equations
    are formed anywhere on this route.
    """
    basis = np.asarray(basis, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128).reshape(-1)
    if basis.ndim != 2 or basis.shape[0] != y.shape[0]:
        raise ShapeMismatchError(f"basis {basis.shape} incompatible with vector of length {y.shape[0]}")
    if basis.size == 0:
        return float(np.linalg.norm(y))
    u, s, _ = np.linalg.svd(basis, full_matrices=False)
    cutoff = max(basis.shape) * np.finfo(np.float64).eps * (s[0] if len(s) else 0.0)
    u = u[:, : int(np.sum(s > cutoff))]
    return float(np.linalg.norm(y - u @ (u.conj().T @ y)))
