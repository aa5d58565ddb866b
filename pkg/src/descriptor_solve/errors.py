"""Exception hierarchy for descriptor-system analysis."""


class DescriptorError(Exception):
    """Base class for all errors raised by this package."""


class ShapeMismatchError(DescriptorError, ValueError):
    """Operands have incompatible dimensions."""


class NonSquareError(DescriptorError, ValueError):
    """A square matrix (or square pencil) was required."""


class TooLargeError(DescriptorError, ValueError):
    """Matrix exceeds the configured dense-solver size cap."""


class RankDeficientError(DescriptorError):
    """Least-squares matrix has numerically dependent columns."""


class SingularMatrixError(DescriptorError):
    """Square system matrix is numerically singular."""


class EigenConvergenceError(DescriptorError):
    """The iterative eigenvalue solver exhausted its iteration budget."""


class ZeroPolynomialError(DescriptorError):
    """Every polynomial coefficient is below tolerance; roots undefined."""


class NotRegularError(DescriptorError):
    """The pencil is singular; the solution theory does not apply."""


class IllConditionedError(DescriptorError):
    """Decomposition transform condition number exceeds the allowed bound."""


class ReorderingError(DescriptorError):
    """Finite/infinite eigenvalue separation is ambiguous at tolerance."""


class NotNilpotentError(DescriptorError):
    """Matrix powers do not decay to zero within the dimension bound."""


class NotConsistentError(DescriptorError):
    """Initial condition admits no exact solution through it."""


class InsufficientHorizonError(DescriptorError):
    """Input sequence is too short for the requested anticausal window."""


class ParseError(DescriptorError, ValueError):
    """System definition file is malformed."""


class MissingInitialConditionError(ParseError):
    """Operation requires Y0 but the system file does not provide one."""
