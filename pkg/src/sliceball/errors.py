"""Exception types shared across the package."""


class SliceballError(Exception):
    """Base class for all package-specific errors."""


class NonOrthogonalUnits(SliceballError):
    """The pair (i, j) is not an orthogonal pair of imaginary units."""


class UnknownScheme(SliceballError):
    """Unrecognized sphere-sampling scheme identifier."""


class OutOfDomain(SliceballError):
    """Evaluation point lies outside the declared domain of the function."""


class TruncationBudgetExceeded(SliceballError):
    """Series tail bound exceeds the declared tolerance at the requested radius."""


class RangeViolation(SliceballError):
    """Inner function of a composition does not map the disc into the disc."""


class SingularDenominator(SliceballError):
    """Moebius denominator too close to zero."""


class EvaluationFailure(SliceballError):
    """Integrand evaluation failed at a quadrature node."""


class DivergentIntegral(SliceballError):
    """Quadrature failed to stabilize under node refinement."""


class ZeroSlice(SliceballError):
    """Slice weight is numerically zero; normalized slice measure undefined."""


class NonMonotoneProfile(SliceballError):
    """Radial majorant profile is not monotone nondecreasing."""


class GapViolation(SliceballError):
    """Exponent sequence violates the declared gap ratio."""
