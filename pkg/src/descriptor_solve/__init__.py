"""Analysis and solution of singular linear discrete-time systems.

Systems of the form ``F y[k+1] = G y[k] + v[k]`` with a possibly singular
leading coefficient are handled through the matrix pencil ``s F - G``:
classification (regular/singular), Weierstrass-form decomposition,
consistency analysis of initial conditions, and unique or least-squares
optimal trajectories.
"""

__version__ = "0.1.0"

from .errors import (
    DescriptorError,
    EigenConvergenceError,
    IllConditionedError,
    InsufficientHorizonError,
    MissingInitialConditionError,
    NonSquareError,
    NotConsistentError,
    NotNilpotentError,
    NotRegularError,
    ParseError,
    RankDeficientError,
    ReorderingError,
    ShapeMismatchError,
    SingularMatrixError,
    TooLargeError,
    ZeroPolynomialError,
)
from .estimator import DescriptorSolver
from .pencil import (
    CharPoly,
    FiniteSpectrum,
    Pencil,
    PencilClassification,
    PencilKind,
    char_poly,
    classify,
    finite_spectrum,
)
from .solver import (
    ConsistencyVerdict,
    InputSequence,
    Trajectory,
    TrajectoryKind,
    check_consistency,
    forcing_term,
    general_solution,
    optimal_solution,
    optimal_solution_with_input,
    perturbation_distance,
    unique_solution,
)
from .weierstrass import (
    DecompositionReport,
    WeierstrassDecomposition,
    decompose,
    nilpotency_index,
    verify,
)

__all__ = [
    "__version__",
    # estimator facade
    "DescriptorSolver",
    # pencil analysis
    "Pencil",
    "CharPoly",
    "FiniteSpectrum",
    "PencilClassification",
    "PencilKind",
    "char_poly",
    "classify",
    "finite_spectrum",
    # decomposition
    "WeierstrassDecomposition",
    "DecompositionReport",
    "decompose",
    "verify",
    "nilpotency_index",
    # solution theory
    "InputSequence",
    "Trajectory",
    "TrajectoryKind",
    "ConsistencyVerdict",
    "forcing_term",
    "general_solution",
    "check_consistency",
    "unique_solution",
    "optimal_solution",
    "optimal_solution_with_input",
    "perturbation_distance",
    # errors
    "DescriptorError",
    "ShapeMismatchError",
    "NonSquareError",
    "TooLargeError",
    "RankDeficientError",
    "SingularMatrixError",
    "EigenConvergenceError",
    "ZeroPolynomialError",
    "NotRegularError",
    "IllConditionedError",
    "ReorderingError",
    "NotNilpotentError",
    "NotConsistentError",
    "InsufficientHorizonError",
    "ParseError",
    "MissingInitialConditionError",
]
