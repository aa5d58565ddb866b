"""Scikit-learn style estimator facade over the functional API."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .errors import NotRegularError
from .pencil import Pencil, classify
from .solver import (
    ConsistencyVerdict,
    InputSequence,
    Trajectory,
    check_consistency,
    optimal_solution_with_input,
    unique_solution,
)
from .validation import DEFAULT_MAX_DIM, as_matrix, demote_real
from .weierstrass import decompose


class DescriptorSolver(BaseEstimator):
    """Solver for singular linear discrete-time systems ``F y[k+1] = G y[k] + v[k]``.

    ``fit`` analyses the matrix pair: it classifies the pencil ``s F - G``,
    extracts the finite spectrum, and computes the separating decomposition.
    ``transform`` maps initial conditions to their nearest consistent
    vectors, and ``predict`` rolls trajectories out of them.

    Parameters
    ----------
    horizon : int, default=20
        Number of steps per emitted trajectory (``horizon + 1`` states).
    tol : float, default=1e-8
        Relative consistency tolerance: an initial condition is consistent
        when its projection residual is at most ``tol * (1 + ||y0||)``.
    mode : {'auto', 'unique', 'optimal'}, default='auto'
        Solve strategy for ``predict``/``solve``: 'auto' picks the unique
        solution through consistent initial conditions and the least-squares
        optimal one otherwise.
    pad_zero : bool, default=False
        Extend short input sequences with zeros instead of raising.  This
        changes the solved problem and is therefore opt-in.
    extend_forced : bool, default=False
        Allow the optimal solve with nonzero inputs (an extension of the
        zero-input optimality result).
    max_dim : int, default=64
        Soft cap on matrix dimensions; these are dense desk-scale methods.

    Attributes
    ----------
    classification_ : PencilClassification
        Total classification verdict from ``fit``.
    is_regular_ : bool
    char_poly_ : CharPoly or None
    eigenvalues_ : list of (complex, int) or None
        Finite eigenvalues with algebraic multiplicities, ordered by
        (real, imaginary) part.
    n_finite_, n_infinite_ : int or None
        Dimension split of the decomposition (their sum is ``m``).
    index_ : int or None
        Nilpotency index of the infinite block.
    decomposition_ : WeierstrassDecomposition or None

    Examples
    --------
    >>> import numpy as np
    >>> est = DescriptorSolver(horizon=3).fit([[1, 1], [1, 1]],
    ...                                       [[0.2, -0.4], [-0.4, 0.0]])
    >>> est.n_finite_, est.n_infinite_
    (1, 1)
    >>> est.predict([2.0, 3.0]).shape
    (4, 2)
    """

    def __init__(
        self,
        horizon: int = 20,
        tol: float = 1e-8,
        mode: str = "auto",
        pad_zero: bool = False,
        extend_forced: bool = False,
        max_dim: int = DEFAULT_MAX_DIM,
    ):
        self.horizon = horizon
        self.tol = tol
        self.mode = mode
        self.pad_zero = pad_zero
        self.extend_forced = extend_forced
        self.max_dim = max_dim

    def fit(self, F, G=None) -> "DescriptorSolver":
        """Analyse the system matrices.

        Parameters
        ----------
        F : array_like, shape (r, m)
            Leading coefficient (may be singular).
        G : array_like, shape (r, m)
            Right-hand side coefficient.

        Returns
        -------
        self
        """
        if G is None:
            raise ValueError("fit requires both system matrices F and G")
        if self.mode not in ("auto", "unique", "optimal"):
            raise ValueError(f"mode must be 'auto', 'unique' or 'optimal', got {self.mode!r}")
        F = as_matrix(F, name="F", max_dim=self.max_dim)
        G = as_matrix(G, name="G", max_dim=self.max_dim)
        pencil = Pencil(F, G)
        classification = classify(pencil)
        self.pencil_ = pencil
        self.classification_ = classification
        self.is_regular_ = classification.is_regular
        self.char_poly_ = classification.char_poly
        self.n_features_in_ = pencil.cols
        if classification.is_regular:
            spectrum = classification.spectrum
            self.spectrum_ = spectrum
            self.eigenvalues_ = list(spectrum.eigenvalues)
            self.n_finite_ = spectrum.n_finite
            self.n_infinite_ = spectrum.n_infinite
            self.decomposition_ = decompose(pencil, spectrum)
            self.index_ = self.decomposition_.index
        else:
            self.spectrum_ = None
            self.eigenvalues_ = None
            self.n_finite_ = None
            self.n_infinite_ = None
            self.decomposition_ = None
            self.index_ = None
        return self

    def _require_regular(self):
        check_is_fitted(self, "classification_")
        if self.decomposition_ is None:
            raise NotRegularError(
                f"pencil is {self.classification_.kind.value}; solution theory needs a regular pencil"
            )
        return self.decomposition_

    def _as_batch(self, Y0) -> tuple[np.ndarray, bool]:
        arr = np.asarray(Y0, dtype=np.complex128)
        if arr.ndim == 1:
            return arr[None, :], True
        if arr.ndim == 2:
            return arr, False
        raise ValueError(f"initial conditions must be (m,) or (n, m), got shape {arr.shape}")

    def transform(self, Y0) -> np.ndarray:
        """Project initial conditions onto the zero-input consistent set.

        Parameters
        ----------
        Y0 : array_like, shape (n, m) or (m,)
            Initial condition row(s).

        Returns
        -------
        ndarray of the same shape
            Nearest consistent initial vector for each row.
        """
        decomp = self._require_regular()
        batch, squeeze = self._as_batch(Y0)
        out = np.stack(
            [check_consistency(decomp, row, tol=self.tol).projected for row in batch]
        )
        out = demote_real(out)
        return out[0] if squeeze else out

    def consistency(self, y0, inputs=None) -> ConsistencyVerdict:
        """Consistency verdict for a single initial condition."""
        decomp = self._require_regular()
        return check_consistency(
            decomp, y0, self._inputs(inputs), tol=self.tol, pad_zero=self.pad_zero
        )

    def solve(self, y0, inputs=None, mode: str | None = None) -> Trajectory:
        """Full trajectory object for a single initial condition."""
        decomp = self._require_regular()
        mode = self.mode if mode is None else mode
        V = self._inputs(inputs)
        if mode == "unique":
            return unique_solution(
                decomp, y0, V, self.horizon, tol=self.tol, pad_zero=self.pad_zero
            )
        if mode == "optimal":
            return optimal_solution_with_input(
                decomp, y0, V, self.horizon,
                extend_forced=self.extend_forced, pad_zero=self.pad_zero,
            )
        if mode != "auto":
            raise ValueError(f"mode must be 'auto', 'unique' or 'optimal', got {mode!r}")
        verdict = check_consistency(decomp, y0, V, tol=self.tol, pad_zero=self.pad_zero)
        if verdict.consistent:
            return unique_solution(decomp, y0, V, self.horizon, tol=self.tol, pad_zero=self.pad_zero)
        return optimal_solution_with_input(
            decomp, y0, V, self.horizon,
            extend_forced=self.extend_forced, pad_zero=self.pad_zero,
        )

    def predict(self, Y0, inputs=None) -> np.ndarray:
        """Trajectory states for one or many initial conditions.

        Returns ``(horizon + 1, m)`` for a single vector and
        ``(n, horizon + 1, m)`` for a batch of rows.
        """
        self._require_regular()
        batch, squeeze = self._as_batch(Y0)
        stacked = np.stack(
            [np.asarray(self.solve(row, inputs).states, dtype=np.complex128) for row in batch]
        )
        stacked = demote_real(stacked)
        return stacked[0] if squeeze else stacked

    def _inputs(self, inputs) -> InputSequence | None:
        if inputs is None or isinstance(inputs, InputSequence):
            return inputs
        return InputSequence.from_vectors(inputs, r=self.pencil_.rows)
