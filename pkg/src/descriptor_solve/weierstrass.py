"""Weierstrass-form decomposition of a regular pencil.

Finds non-singular ``P``, ``Q`` with::

    P F Q = [[I, 0], [0, N]]        (N nilpotent of some index)
    P G Q = [[A, 0], [0, I]]        (A carries the finite eigenvalues)

separating the finite eigenstructure (leading block, dimension ``n_finite``)
from the infinite one (trailing block, dimension ``n_infinite``).  The finite
block ``A`` is *not* reduced to strict Jordan form: any matrix satisfying the
block identities is accepted, because every downstream quantity (consistent
subspace, trajectories, projections) is invariant under similarity of that
block, while numerical Jordan chains are ill-posed.

Construction: a QZ simultaneous triangularisation, eigenvalue reordering so
the finite part leads, a generalized Sylvester solve that annihilates the
off-diagonal coupling, and a final block normalisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    IllConditionedError,
    NotNilpotentError,
    NotRegularError,
    ReorderingError,
    ShapeMismatchError,
    SingularMatrixError,
)
from .linalg import solve_square
from .pencil import FiniteSpectrum, Pencil, classify
from .validation import condition_estimate, demote_real

#: Required multiplicative gap between the smallest finite and the largest
#: infinite eigenvalue weight ``|beta| / (|alpha| + |beta|)``; below this the
#: finite/infinite split is declared ambiguous.
SEPARATION_GAP = 16.0

#: Default tolerance for nilpotency detection and conditioning guards.
DECOMPOSE_TOL = 1e-12
NILPOTENCY_TOL = 1e-10


@dataclass(frozen=True)
class WeierstrassDecomposition:
    """Equivalence transform separating finite and infinite eigenstructure.

    Attributes
    ----------
    P, Q : ndarray, shape (m, m)
        Non-singular left/right transforms.
    finite_block : ndarray, shape (n_finite, n_finite)
        The finite-eigenvalue dynamics block (``P G Q`` leading block).
    nilpotent_block : ndarray, shape (n_infinite, n_infinite)
        The nilpotent block of ``P F Q``; its index sets the anticausal
        window of forced solutions.
    index : int
        Nilpotency index: smallest ``k`` with ``nilpotent_block ** k == 0``
        at tolerance (0 for an empty block).
    pencil : Pencil
        The pencil this decomposition was computed from; kept so solution
        routines can report residuals against the original data.
    """

    P: np.ndarray
    Q: np.ndarray
    finite_block: np.ndarray
    nilpotent_block: np.ndarray
    n_finite: int
    n_infinite: int
    index: int
    pencil: Pencil = field(repr=False)

    def __post_init__(self):
        m = self.n_finite + self.n_infinite
        for name in ("P", "Q"):
            arr = np.asarray(getattr(self, name))
            if arr.shape != (m, m):
                raise ShapeMismatchError(f"{name} must be {m}x{m}, got {arr.shape}")
            frozen = np.array(arr)
            frozen.flags.writeable = False
            object.__setattr__(self, name, frozen)
        for name, dim in (("finite_block", self.n_finite), ("nilpotent_block", self.n_infinite)):
            arr = np.array(np.asarray(getattr(self, name)).reshape(dim, dim))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def m(self) -> int:
        return self.n_finite + self.n_infinite

    @property
    def finite_basis(self) -> np.ndarray:
        """First ``n_finite`` columns of Q: basis of the consistent subspace."""
        return self.Q[:, : self.n_finite]

    @property
    def infinite_basis(self) -> np.ndarray:
        return self.Q[:, self.n_finite :]

    @property
    def left_finite(self) -> np.ndarray:
        """First ``n_finite`` rows of P (multiplies inputs in the slow part)."""
        return self.P[: self.n_finite]

    @property
    def left_infinite(self) -> np.ndarray:
        return self.P[self.n_finite :]


@dataclass(frozen=True)
class DecompositionReport:
    """Residual magnitudes of the block identities; reporting only."""

    f_residual: float
    g_residual: float
    nilpotency_residual: float
    cond_p: float
    cond_q: float


def _separation_threshold(weights: np.ndarray, n_finite: int, sep_tol: float | None) -> float:
    """Weight threshold separating finite from infinite eigenvalues.

    With ``sep_tol`` given, that value is used verbatim.  Otherwise the
    threshold sits in the gap between the ``n_finite`` largest weights and
    the rest, which must be a clear multiplicative gap: defective infinite
    eigenvalues perturb to weights of order ``eps ** (1 / blocksize)``, and
    an overlap with the finite weights means the split is genuinely
    ill-determined.

    Raises
    ------
    ReorderingError
        If the gap is below :data:`SEPARATION_GAP`.
    """
    if sep_tol is not None:
        return float(sep_tol)
    m = len(weights)
    if n_finite <= 0:
        return float(np.max(weights, initial=0.0)) * 2.0 + 1.0
    if n_finite >= m:
        return 0.0
    ordered = np.sort(weights)
    w_infinite = float(ordered[m - n_finite - 1])
    w_finite = float(ordered[m - n_finite])
    if w_finite <= SEPARATION_GAP * w_infinite:
        raise ReorderingError(
            f"largest infinite-eigenvalue weight {w_infinite:.3e} and smallest "
            f"finite one {w_finite:.3e} are within a factor {SEPARATION_GAP:g}; "
            "the finite/infinite split is ambiguous"
        )
    if w_infinite == 0.0:
        return w_finite / SEPARATION_GAP
    return float(np.sqrt(w_finite * w_infinite))


def decompose(
    pencil: Pencil,
    spectrum: FiniteSpectrum | None = None,
    *,
    tol: float = DECOMPOSE_TOL,
    sep_tol: float | None = None,
    nil_tol: float = NILPOTENCY_TOL,
) -> WeierstrassDecomposition:
    """Compute a Weierstrass-form decomposition of a regular pencil.

    Parameters
    ----------
    pencil : Pencil
        Square pencil; classified internally when ``spectrum`` is omitted.
    spectrum : FiniteSpectrum, optional
        Finite spectrum from :func:`~descriptor_solve.pencil.classify`; its
        ``n_finite`` fixes the block split and is cross-checked against the
        QZ eigenvalue separation.
    tol : float
        Conditioning guard: raises when the condition estimate of ``P`` or
        ``Q`` exceeds ``1 / tol``.
    sep_tol : float, optional
        A generalized eigenvalue ``(alpha, beta)`` is treated as infinite
        when ``|beta| <= sep_tol * (|alpha| + |beta|)``.  By default the
        threshold is placed adaptively in the gap between the ``n_infinite``
        smallest and the ``n_finite`` largest weights: weights of defective
        infinite eigenvalues scatter like ``eps ** (1 / blocksize)``, so no
        fixed threshold is safe.
    nil_tol : float
        Tolerance for the nilpotency-index scan.

    Raises
    ------
    NotRegularError
        If the pencil is singular (non-square or zero determinant).
    ReorderingError
        If the finite/infinite separation is ambiguous (weight gap below
        ``SEPARATION_GAP``, eigenvalue count mismatch, or a failed swap).
    IllConditionedError
        If the transforms fail the conditioning guard or the decoupling
        system is numerically singular.
    """
    if spectrum is None:
        classification = classify(pencil)
        if not classification.is_regular:
            raise NotRegularError(f"cannot decompose a {classification.kind.value} pencil")
        spectrum = classification.spectrum
    elif not pencil.is_square:
        raise NotRegularError("cannot decompose a non-square pencil")

    m = pencil.cols
    p, q = spectrum.n_finite, spectrum.n_infinite
    if p + q != m:
        raise ShapeMismatchError(f"spectrum split {p}+{q} does not match dimension {m}")

    real_input = bool(
        np.all(pencil.F.imag == 0.0) and np.all(pencil.G.imag == 0.0)
    )
    F = pencil.F.real if real_input else pencil.F
    G = pencil.G.real if real_input else pencil.G

    def finite_sel(alpha, beta):
        weights = np.abs(beta) / np.maximum(
            np.abs(alpha) + np.abs(beta), np.finfo(float).tiny
        )
        return weights > _separation_threshold(weights, p, sep_tol)

    # Pair order (G, F): generalized eigenvalues alpha/beta solve
    # det(lambda F - G) = 0, so beta ~ 0 flags the infinite eigenvalues.
    try:
        GG, FF, alpha, beta, Ql, Zr = scipy.linalg.ordqz(
            G, F, sort=finite_sel, output="real" if real_input else "complex"
        )
    except ValueError as exc:
        raise ReorderingError(f"eigenvalue reordering failed: {exc}") from exc
    weights = np.abs(beta) / np.maximum(np.abs(alpha) + np.abs(beta), np.finfo(float).tiny)
    n_finite_qz = int(np.sum(weights > _separation_threshold(weights, p, sep_tol)))
    if n_finite_qz != p:
        raise ReorderingError(
            f"QZ separation found {n_finite_qz} finite eigenvalues but the "
            f"characteristic polynomial has degree {p}"
        )

    U = Ql.conj().T
    W = Zr
    F11, F12, F22 = FF[:p, :p], FF[:p, p:], FF[p:, p:]
    G11, G12, G22 = GG[:p, :p], GG[:p, p:], GG[p:, p:]

    # Annihilate the coupling blocks: find R, L with
    #   F11 R + L F22 = -F12,   G11 R + L G22 = -G12
    # solved directly over the 2*p*q unknowns (desk scale).
    if p and q:
        eye_p, eye_q = np.eye(p), np.eye(q)
        system = np.block(
            [
                [np.kron(eye_q, F11), np.kron(F22.T, eye_p)],
                [np.kron(eye_q, G11), np.kron(G22.T, eye_p)],
            ]
        )
        rhs = -np.concatenate([F12.flatten(order="F"), G12.flatten(order="F")])
        try:
            solution = solve_square(system, rhs)
        except SingularMatrixError as exc:
            raise IllConditionedError(f"coupling-block solve is singular: {exc}") from exc
        R = solution[: p * q].reshape((p, q), order="F")
        L = solution[p * q :].reshape((p, q), order="F")
    else:
        R = np.zeros((p, q))
        L = np.zeros((p, q))

    P = np.array(U, dtype=np.complex128)
    P[:p] += L @ U[p:]
    Q = np.array(W, dtype=np.complex128)
    Q[:, p:] += W[:, :p] @ R

    # Normalise the diagonal blocks: finite F-block to identity (F11 is
    # invertible there), infinite G-block to identity (G22 is invertible).
    try:
        finite_block = solve_square(F11, G11) if p else np.zeros((0, 0))
        nilpotent_block = solve_square(G22, F22) if q else np.zeros((0, 0))
        if p:
            P[:p] = solve_square(F11, P[:p])
        if q:
            P[p:] = solve_square(G22, P[p:])
    except SingularMatrixError as exc:
        raise ReorderingError(f"block normalisation failed: {exc}") from exc

    cond_p, cond_q = condition_estimate(P), condition_estimate(Q)
    if max(cond_p, cond_q) > 1.0 / tol:
        raise IllConditionedError(
            f"transform condition estimates ({cond_p:.3e}, {cond_q:.3e}) exceed {1.0 / tol:.1e}"
        )

    nilpotent_block = demote_real(nilpotent_block)
    return WeierstrassDecomposition(
        P=demote_real(P),
        Q=demote_real(Q),
        finite_block=demote_real(finite_block),
        nilpotent_block=nilpotent_block,
        n_finite=p,
        n_infinite=q,
        index=nilpotency_index(nilpotent_block, tol=nil_tol),
        pencil=pencil,
    )


def verify(decomp: WeierstrassDecomposition, pencil: Pencil) -> DecompositionReport:
    """Measure how well ``decomp`` reproduces ``pencil``; never raises on
    large residuals.

    Raises
    ------
    ShapeMismatchError
        If the decomposition and pencil dimensions differ.
    """
    if not pencil.is_square or pencil.cols != decomp.m:
        raise ShapeMismatchError(
            f"decomposition is {decomp.m}x{decomp.m}, pencil is {pencil.F.shape}"
        )
    p, m = decomp.n_finite, decomp.m
    target_f = np.zeros((m, m), dtype=np.complex128)
    target_f[:p, :p] = np.eye(p)
    target_f[p:, p:] = decomp.nilpotent_block
    target_g = np.zeros((m, m), dtype=np.complex128)
    target_g[:p, :p] = decomp.finite_block
    target_g[p:, p:] = np.eye(m - p)
    f_res = float(np.linalg.norm(decomp.P @ pencil.F @ decomp.Q - target_f))
    g_res = float(np.linalg.norm(decomp.P @ pencil.G @ decomp.Q - target_g))
    nil_res = float(
        np.linalg.norm(np.linalg.matrix_power(decomp.nilpotent_block, decomp.index))
        if decomp.n_infinite
        else 0.0
    )
    return DecompositionReport(
        f_residual=f_res,
        g_residual=g_res,
        nilpotency_residual=nil_res,
        cond_p=condition_estimate(decomp.P),
        cond_q=condition_estimate(decomp.Q),
    )


def nilpotency_index(H, tol: float = NILPOTENCY_TOL) -> int:
    """Smallest ``k >= 0`` with ``||H**k|| <= tol * max(1, ||H||)**k``.

    The empty matrix has index 0; a zero matrix has index 1.

    Raises
    ------
    NotNilpotentError
        If no such ``k`` exists up to the matrix dimension.
    """
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ShapeMismatchError(f"nilpotency index needs a square matrix, got {H.shape}")
    dim = H.shape[0]
    base = max(1.0, float(np.linalg.norm(H)))
    power = np.eye(dim, dtype=np.complex128)
    norm_k = 0.0
    for k in range(dim + 1):
        norm_k = float(np.linalg.norm(power))
        if norm_k <= tol * base**k:
            return k
        power = power @ H
    raise NotNilpotentError(
        f"||H**{dim}|| = {norm_k:.3e} exceeds tolerance {tol * base**dim:.3e}; "
        "matrix is not numerically nilpotent"
    )
