"""Matrix-pencil representation, characteristic polynomial, classification.

A pencil is the one-parameter family ``s F - G``.  A square pencil whose
determinant polynomial is not identically zero is *regular*; only regular
pencils admit the decomposition and solution theory implemented by the rest
of the package.  Everything else is detected and reported, never guessed at.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NonSquareError
from .linalg import poly_roots
from .validation import DEFAULT_MAX_DIM, as_matrix, demote_scalar, require_same_shape

#: Relative coefficient threshold for the identically-zero-determinant test.
ZERO_DET_RTOL = 1e-10

#: Coefficient threshold (relative to the largest) below which trailing
#: coefficients do not count toward the polynomial degree.
DEGREE_RTOL = 1e-10


@dataclass(frozen=True)
class Pencil:
    """The matrix pair ``(F, G)`` of the system ``F y[k+1] = G y[k] + v[k]``."""

    F: np.ndarray
    G: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "F", as_matrix(self.F, name="F", max_dim=None))
        object.__setattr__(self, "G", as_matrix(self.G, name="G", max_dim=None))
        require_same_shape(self.F, self.G)
        if min(self.F.shape) < 1:
            raise NonSquareError("pencil matrices must have at least one row and column")

    @classmethod
    def from_arrays(cls, F, G, *, max_dim: int = DEFAULT_MAX_DIM) -> "Pencil":
        return cls(as_matrix(F, name="F", max_dim=max_dim), as_matrix(G, name="G", max_dim=max_dim))

    @property
    def rows(self) -> int:
        return self.F.shape[0]

    @property
    def cols(self) -> int:
        return self.F.shape[1]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols


@dataclass(frozen=True)
class CharPoly:
    """Coefficients of ``det(s F - G)`` in ascending degree order.

    ``coeffs`` always has ``m + 1`` entries; ``degree`` is the index of the
    last coefficient above the trim threshold, so entries beyond it are
    numerical noise.  ``node_scale`` records the interpolation radius and
    seeds downstream clustering tolerances.
    """

    coeffs: np.ndarray
    degree: int
    node_scale: float

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.complex128)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def m(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, s: complex) -> complex:
        return complex(np.polyval(self.coeffs[::-1], s))


@dataclass(frozen=True)
class FiniteSpectrum:
    """Finite eigenvalues with algebraic multiplicities and the degree split.

    ``n_finite`` equals the characteristic-polynomial degree and the
    multiplicities sum to it; ``n_infinite = m - n_finite`` is the algebraic
    multiplicity of the eigenvalue at infinity.
    """

    eigenvalues: tuple[tuple[complex, int], ...]
    n_finite: int
    n_infinite: int

    def __post_init__(self):
        total = sum(mult for _, mult in self.eigenvalues)
        if total != self.n_finite:
            raise ValueError(f"multiplicities sum to {total}, expected {self.n_finite}")

    @property
    def values(self) -> np.ndarray:
        """Eigenvalues repeated by multiplicity, in deterministic order."""
        out = [val for val, mult in self.eigenvalues for _ in range(mult)]
        return np.array(out, dtype=np.complex128)


class PencilKind(enum.Enum):
    REGULAR = "regular"
    SINGULAR_NONSQUARE = "singular_nonsquare"
    SINGULAR_ZERO_DETERMINANT = "singular_zero_determinant"


@dataclass(frozen=True)
class PencilClassification:
    """Total classification verdict; ``spectrum`` is set only when regular."""

    kind: PencilKind
    spectrum: FiniteSpectrum | None = None
    char_poly: CharPoly | None = field(default=None, repr=False)

    @property
    def is_regular(self) -> bool:
        return self.kind is PencilKind.REGULAR


def _interpolation_nodes(m: int, rho: float, order: int, angle: float) -> np.ndarray:
    """``m + 1`` rotated Chebyshev nodes of the given grid order.

    The rotation keeps real eigenvalues off the nodes; varying the grid order
    between the primary and scale-probe sets keeps the two sets disjoint
    (at most one of them can contain the origin).
    """
    j = np.arange(m + 1)
    return rho * np.exp(1j * angle) * np.cos(np.pi * (2 * j + 1) / (2 * order))


def _det_at(pencil: Pencil, nodes: np.ndarray) -> np.ndarray:
    return np.array([np.linalg.det(s * pencil.F - pencil.G) for s in nodes])


def char_poly(pencil: Pencil) -> CharPoly:
    """Characteristic polynomial of a square pencil by node interpolation.

    Evaluates ``det(s F - G)`` at ``m + 1`` rotated Chebyshev nodes of radius
    ``(1 + ||G||) / (1 + ||F||)`` and solves the Vandermonde system for the
    coefficients.

    Raises
    ------
    NonSquareError
        If the pencil is not square.
    """
    if not pencil.is_square:
        raise NonSquareError(f"characteristic polynomial needs a square pencil, got {pencil.F.shape}")
    m = pencil.cols
    rho = (1.0 + np.linalg.norm(pencil.G)) / (1.0 + np.linalg.norm(pencil.F))
    nodes = _interpolation_nodes(m, rho, m + 1, np.pi / (4 * (m + 1)))
    dets = _det_at(pencil, nodes)
    vander = np.vander(nodes, m + 1, increasing=True)
    coeffs = np.linalg.solve(vander, dets)
    scale = float(np.max(np.abs(coeffs)))
    above = np.nonzero(np.abs(coeffs) > DEGREE_RTOL * scale)[0] if scale else np.array([], dtype=int)
    degree = int(above.max()) if above.size else 0
    return CharPoly(coeffs=coeffs, degree=degree, node_scale=rho)


def classify(pencil: Pencil, tol: float = ZERO_DET_RTOL) -> PencilClassification:
    """Classify a pencil as regular or singular; classification is total.

    The determinant is declared identically zero when every interpolated
    coefficient is at most ``tol`` times the largest determinant magnitude
    over a second, disjoint node set.
    """
    if not pencil.is_square:
        return PencilClassification(kind=PencilKind.SINGULAR_NONSQUARE)
    cp = char_poly(pencil)
    m = pencil.cols
    probe = _interpolation_nodes(m, cp.node_scale, m + 2, np.pi / (4 * (m + 1)) + np.pi / 3)
    det_scale = float(np.max(np.abs(_det_at(pencil, probe))))
    if np.all(np.abs(cp.coeffs) <= tol * det_scale):
        return PencilClassification(kind=PencilKind.SINGULAR_ZERO_DETERMINANT, char_poly=cp)
    return PencilClassification(
        kind=PencilKind.REGULAR, spectrum=finite_spectrum(cp), char_poly=cp
    )


def finite_spectrum(cp: CharPoly, cluster_tol: float | None = None) -> FiniteSpectrum:
    """Cluster the characteristic-polynomial roots into (value, multiplicity).

    Roots are clustered by single linkage at ``cluster_tol`` (default
    ``1e-7 * (1 + node_scale)``: companion-matrix roots of a multiple
    eigenvalue scatter at roughly ``eps**(1/multiplicity)``), each cluster's
    value is the mean of its members, and clusters are ordered
    lexicographically by (real, imaginary) part.
    """
    if cluster_tol is None:
        cluster_tol = 1e-7 * (1.0 + cp.node_scale)
    p = cp.degree
    if p == 0:
        return FiniteSpectrum(eigenvalues=(), n_finite=0, n_infinite=cp.m)
    roots = poly_roots(cp.coeffs[: p + 1])
    clusters = _single_linkage(roots, cluster_tol)
    eigenvalues = sorted(
        ((complex(demote_scalar(np.mean(roots[idx]))), len(idx)) for idx in clusters),
        key=lambda item: (item[0].real, item[0].imag),
    )
    return FiniteSpectrum(eigenvalues=tuple(eigenvalues), n_finite=p, n_infinite=cp.m - p)


def _single_linkage(points: np.ndarray, tol: float) -> list[list[int]]:
    """Connected components of the graph linking points within ``tol``."""
    n = len(points)
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())
