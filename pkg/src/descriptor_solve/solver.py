"""Solution theory for ``F y[k+1] = G y[k] + v[k]`` over a regular pencil.

In decomposed coordinates the system splits into a causal recursion on the
finite block and an *anticausal* algebraic part on the nilpotent block: the
state at step ``k`` depends on inputs up to ``k + index - 1``.  The general
solution is ::

    y[k] = B J**k c  +  Q d[k]

with ``B`` the finite basis (leading columns of ``Q``), ``J`` the finite
block, ``c`` a free coefficient vector, and ``d[k]`` the stacked forcing
term of :func:`forcing_term`.

An initial condition is *consistent* when some solution passes through it;
then the coefficient (hence the solution) is unique.  For a non-consistent
initial vector with zero inputs, the optimal solution launches from the
nearest consistent vector in the Euclidean sense: the orthogonal projection
of ``y0`` onto the span of the finite basis.  The projection coefficient is
computed by orthogonal-factorisation least squares; forming the normal
equations explicitly would be numerically inferior, and equivalence of the
two routes is covered by tests rather than assumed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientHorizonError, NotConsistentError, ShapeMismatchError
from .linalg import qr_least_squares
from .validation import as_vector, demote_real
from .weierstrass import WeierstrassDecomposition

#: Default relative consistency tolerance; the verdict compares the
#: projection residual against ``tol * (1 + ||y0||)``.
CONSISTENCY_RTOL = 1e-8


@dataclass(frozen=True)
class InputSequence:
    """Finite horizon of input vectors ``v[0], v[1], ...``, each of size r.

    ``identically_zero`` marks the structurally zero sequence, which is
    valid for any horizon.
    """

    values: np.ndarray
    identically_zero: bool = False

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.complex128)
        if arr.ndim != 2:
            raise ShapeMismatchError(f"input sequence must be (steps, r), got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @classmethod
    def zero(cls, r: int) -> "InputSequence":
        return cls(values=np.zeros((0, r)), identically_zero=True)

    @classmethod
    def from_vectors(cls, vectors, r: int | None = None) -> "InputSequence":
        rows = [as_vector(v, name="v[k]") for v in vectors]
        if not rows:
            if r is None:
                raise ShapeMismatchError("empty input sequence needs an explicit r")
            return cls.zero(r)
        arr = np.stack(rows)
        if r is not None and arr.shape[1] != r:
            raise ShapeMismatchError(f"inputs must have length {r}, got {arr.shape[1]}")
        return cls(values=arr)

    @property
    def r(self) -> int:
        return self.values.shape[1]

    @property
    def n_steps(self) -> int:
        return self.values.shape[0]

    @property
    def is_zero(self) -> bool:
        return self.identically_zero or bool(np.all(self.values == 0))

    def sample(self, k: int, *, pad_zero: bool = False) -> np.ndarray:
        """Input at step ``k``; zeros beyond the horizon only when allowed."""
        if self.identically_zero:
            return np.zeros(self.r, dtype=np.complex128)
        if k < self.n_steps:
            return self.values[k]
        if pad_zero:
            return np.zeros(self.r, dtype=np.complex128)
        raise InsufficientHorizonError(
            f"input v[{k}] required but only {self.n_steps} steps were provided "
            "(the anticausal sum needs future inputs; pass pad_zero to extend with zeros)"
        )


class TrajectoryKind(enum.Enum):
    UNIQUE = "unique"
    OPTIMAL = "optimal"
    GENERAL = "general"


@dataclass(frozen=True)
class Trajectory:
    """States ``y[0] .. y[N]`` plus residual metadata.

    ``max_residual`` is ``max_k ||F y[k+1] - G y[k] - v[k]||_inf`` measured
    against the original system data; ``coefficient`` is the finite-block
    coefficient the trajectory was launched from.
    """

    states: np.ndarray
    max_residual: float
    kind: TrajectoryKind
    coefficient: np.ndarray

    def __post_init__(self):
        arr = np.array(self.states)
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise ShapeMismatchError(f"states must be (horizon + 1, m), got {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "states", arr)
        coeff = np.array(self.coefficient)
        coeff.flags.writeable = False
        object.__setattr__(self, "coefficient", coeff)

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1

    @property
    def m(self) -> int:
        return self.states.shape[1]


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Outcome of the consistency test for an initial condition.

    ``coefficient`` is the least-squares coefficient of the initial vector
    in the finite basis (the launch coefficient when consistent, the
    projection coefficient otherwise); ``distance`` is the Euclidean gap to
    the consistent set and ``projected`` the nearest consistent vector.
    """

    consistent: bool
    coefficient: np.ndarray
    distance: float
    projected: np.ndarray
    tolerance: float

    def __post_init__(self):
        for name in ("coefficient", "projected"):
            arr = np.array(getattr(self, name))
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)


def _as_inputs(decomp: WeierstrassDecomposition, inputs) -> InputSequence:
    if inputs is None:
        return InputSequence.zero(decomp.pencil.rows)
    if isinstance(inputs, InputSequence):
        if not inputs.identically_zero and inputs.r != decomp.pencil.rows:
            raise ShapeMismatchError(
                f"inputs have length {inputs.r}, system has {decomp.pencil.rows} rows"
            )
        return inputs
    return InputSequence.from_vectors(inputs, r=decomp.pencil.rows)


def forcing_term(
    decomp: WeierstrassDecomposition,
    inputs: InputSequence | None,
    k: int,
    *,
    pad_zero: bool = False,
) -> np.ndarray:
    """Stacked forcing term ``d[k]`` in decomposed coordinates (length m).

    Top block: the causal convolution ``sum_{i<k} J**(k-1-i) P1 v[i]``.
    Bottom block: the anticausal sum ``-sum_{i<index} N**i P2 v[k+i]``,
    which reads inputs up to step ``k + index - 1``.

    Raises
    ------
    InsufficientHorizonError
        When the anticausal sum outruns the provided inputs and
        ``pad_zero`` is not set.
    """
    if k < 0:
        raise ValueError("step index must be non-negative")
    V = _as_inputs(decomp, inputs)
    p, q = decomp.n_finite, decomp.n_infinite
    top = np.zeros(p, dtype=np.complex128)
    for i in range(k):
        top = decomp.finite_block @ top + decomp.left_finite @ V.sample(i, pad_zero=pad_zero)
    bottom = np.zeros(q, dtype=np.complex128)
    if q:
        power = np.eye(q, dtype=np.complex128)
        for i in range(decomp.index):
            bottom -= power @ (decomp.left_infinite @ V.sample(k + i, pad_zero=pad_zero))
            power = power @ decomp.nilpotent_block
    return np.concatenate([top, bottom])


def _rollout(
    decomp: WeierstrassDecomposition,
    coefficient: np.ndarray,
    V: InputSequence,
    horizon: int,
    kind: TrajectoryKind,
    *,
    pad_zero: bool = False,
) -> Trajectory:
    """Evaluate ``y[k] = B J**k c + Q d[k]`` for ``k = 0 .. horizon``."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    p, q, m = decomp.n_finite, decomp.n_infinite, decomp.m
    states = np.zeros((horizon + 1, m), dtype=np.complex128)
    finite_coord = np.asarray(coefficient, dtype=np.complex128).reshape(p)
    # Causal part of d[k] advances by the same recursion as the coefficient,
    # so fold them together; the anticausal part is summed directly.
    for k in range(horizon + 1):
        coords = np.zeros(m, dtype=np.complex128)
        coords[:p] = finite_coord
        if q:
            power = np.eye(q, dtype=np.complex128)
            for i in range(decomp.index):
                coords[p:] -= power @ (decomp.left_infinite @ V.sample(k + i, pad_zero=pad_zero))
                power = power @ decomp.nilpotent_block
        states[k] = decomp.Q @ coords
        if k < horizon:
            finite_coord = decomp.finite_block @ finite_coord + decomp.left_finite @ V.sample(
                k, pad_zero=pad_zero
            )
    residual = 0.0
    F, G = decomp.pencil.F, decomp.pencil.G
    for k in range(horizon):
        step = F @ states[k + 1] - G @ states[k] - V.sample(k, pad_zero=True)
        residual = max(residual, float(np.max(np.abs(step))))
    return Trajectory(
        states=demote_real(states),
        max_residual=residual,
        kind=kind,
        coefficient=demote_real(np.asarray(coefficient, dtype=np.complex128).reshape(p)),
    )


def general_solution(
    decomp: WeierstrassDecomposition,
    coefficient,
    inputs: InputSequence | None = None,
    horizon: int = 20,
    *,
    pad_zero: bool = False,
) -> Trajectory:
    """Trajectory launched from an explicit finite-block coefficient."""
    V = _as_inputs(decomp, inputs)
    coeff = as_vector(coefficient, name="coefficient", dim=decomp.n_finite)
    return _rollout(decomp, coeff, V, horizon, TrajectoryKind.GENERAL, pad_zero=pad_zero)


def check_consistency(
    decomp: WeierstrassDecomposition,
    initial,
    inputs: InputSequence | None = None,
    tol: float = CONSISTENCY_RTOL,
    *,
    pad_zero: bool = False,
) -> ConsistencyVerdict:
    """Decide whether a solution passes through ``initial``.

    Solves ``B c = y0 - Q d[0]`` in the least-squares sense; the verdict is
    consistent when the residual is at most ``tol * (1 + ||y0||)``.
    """
    y0 = as_vector(initial, name="y0", dim=decomp.m)
    d0 = forcing_term(decomp, inputs, 0, pad_zero=pad_zero)
    target = y0 - decomp.Q @ d0
    basis = decomp.finite_basis
    if decomp.n_finite:
        coeff = qr_least_squares(basis, target)
    else:
        coeff = np.zeros(0, dtype=np.complex128)
    projected = basis @ coeff + decomp.Q @ d0
    distance = float(np.linalg.norm(y0 - projected))
    threshold = tol * (1.0 + float(np.linalg.norm(y0)))
    return ConsistencyVerdict(
        consistent=distance <= threshold,
        coefficient=demote_real(coeff),
        distance=distance,
        projected=demote_real(projected),
        tolerance=threshold,
    )


def unique_solution(
    decomp: WeierstrassDecomposition,
    initial,
    inputs: InputSequence | None = None,
    horizon: int = 20,
    *,
    tol: float = CONSISTENCY_RTOL,
    pad_zero: bool = False,
) -> Trajectory:
    """The unique trajectory through a consistent initial condition.

    Raises
    ------
    NotConsistentError
        If the initial condition is non-consistent at ``tol``; use
        :func:`optimal_solution` instead.
    """
    verdict = check_consistency(decomp, initial, inputs, tol=tol, pad_zero=pad_zero)
    if not verdict.consistent:
        raise NotConsistentError(
            f"initial condition is {verdict.distance:.3e} from the consistent set "
            f"(tolerance {verdict.tolerance:.3e}); no exact solution passes through it"
        )
    V = _as_inputs(decomp, inputs)
    return _rollout(decomp, verdict.coefficient, V, horizon, TrajectoryKind.UNIQUE, pad_zero=pad_zero)


def optimal_solution(
    decomp: WeierstrassDecomposition,
    initial,
    horizon: int = 20,
) -> Trajectory:
    """Least-squares optimal trajectory for the zero-input system.

    Projects ``y0`` orthogonally onto the span of the finite basis and rolls
    the unique solution out of the projected vector; among all consistent
    initial vectors, the projection minimises the Euclidean perturbation
    ``||y0 - y0_hat||``.  Consistent initial conditions degenerate to the
    unique solution.
    """
    y0 = as_vector(initial, name="y0", dim=decomp.m)
    if decomp.n_finite:
        coeff = qr_least_squares(decomp.finite_basis, y0)
    else:
        coeff = np.zeros(0, dtype=np.complex128)
    V = InputSequence.zero(decomp.pencil.rows)
    return _rollout(decomp, coeff, V, horizon, TrajectoryKind.OPTIMAL)


def optimal_solution_with_input(
    decomp: WeierstrassDecomposition,
    initial,
    inputs: InputSequence | None,
    horizon: int = 20,
    *,
    extend_forced: bool = False,
    pad_zero: bool = False,
) -> Trajectory:
    """Extension of :func:`optimal_solution` to nonzero inputs.

    The published optimality statement covers the zero-input case only; this
    routine projects ``y0 - Q d[0]`` onto the finite basis and applies the
    general solution formula.  Because it goes beyond the proven case it is
    disabled for nonzero inputs unless ``extend_forced`` is set explicitly.
    """
    V = _as_inputs(decomp, inputs)
    if V.is_zero:
        return optimal_solution(decomp, initial, horizon)
    if not extend_forced:
        raise ValueError(
            "optimal solve with nonzero inputs is an extension of the zero-input "
            "optimality result; pass extend_forced=True to enable it"
        )
    y0 = as_vector(initial, name="y0", dim=decomp.m)
    d0 = forcing_term(decomp, V, 0, pad_zero=pad_zero)
    if decomp.n_finite:
        coeff = qr_least_squares(decomp.finite_basis, y0 - decomp.Q @ d0)
    else:
        coeff = np.zeros(0, dtype=np.complex128)
    return _rollout(decomp, coeff, V, horizon, TrajectoryKind.OPTIMAL, pad_zero=pad_zero)


def perturbation_distance(decomp: WeierstrassDecomposition, initial) -> float:
    """Euclidean distance from ``initial`` to the zero-input consistent set.

    Equals ``||y0 - B (B* B)^{-1} B* y0||`` with ``B`` the finite basis,
    evaluated through a stable least-squares solve instead of the explicit
    Gram inverse.
    """
    y0 = as_vector(initial, name="y0", dim=decomp.m)
    if decomp.n_finite == 0:
        return float(np.linalg.norm(y0))
    coeff = qr_least_squares(decomp.finite_basis, y0)
    return float(np.linalg.norm(y0 - decomp.finite_basis @ coeff))
