"""Exception types shared across the package."""


class ErgorateError(Exception):
    """Base class for every error raised by this package."""


class DegreeZero(ErgorateError):
    """Root finding requested for a constant polynomial."""


class NonConvergence(ErgorateError):
    """An iterative solver failed after its allotted restarts."""


class ZeroPolynomial(ErgorateError):
    """Operation undefined for the zero polynomial."""


class DegreeBoundTooSmall(ErgorateError):
    """Interpolation degree bound below the true degree of the result."""


class NonPositiveArgument(ErgorateError):
    """The generating function is only defined for positive arguments."""


class NeriViolated(ErgorateError):
    """Mean increment is nonnegative; no contracting weight exists."""


class PhiNotContracting(ErgorateError):
    """phi(gamma) >= 1 at the requested gamma."""


class RootOnCircle(ErgorateError):
    """A characteristic root sits numerically on the classification circle."""


class RootOnTauCircle(ErgorateError):
    """A characteristic root sits numerically on the tau-refined circle."""


class InconsistentCount(ErgorateError):
    """Inside-root counts disagreed across annulus samples."""


class LambdaOutOfRange(ErgorateError):
    """lambda outside the admissible modulus range."""


class PatternMismatch(ErgorateError):
    """Observed root multiplicities do not form the requested pattern."""


class EtaExceedsG(ErgorateError):
    """More inside roots than boundary equations; elimination unavailable."""


class ParamsInvalid(ErgorateError):
    """Birth-death parameters violate their constraints."""


class DegenerateA(ErgorateError):
    """Boundary probability a = 1 - q: the eliminant has no nontrivial root."""


class GammaOutOfRange(ErgorateError):
    """Weight base gamma outside its admissible interval."""


class MomentDiverges(ErgorateError):
    """The gamma-weighted moment of an unbounded row diverges."""


class SizeTooSmall(ErgorateError):
    """Truncation size too small to contain the boundary block."""


class ModelInvalid(ErgorateError):
    """Model fails a structural invariant."""
