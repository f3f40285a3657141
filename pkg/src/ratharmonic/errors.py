"""Exception hierarchy.

Hypothesis violations (the mathematics does not apply) are kept apart from
numerical failures (the solver could not deliver); the CLI maps the two
families to different exit codes.
"""


class RatHarmonicError(Exception):
    pass


class HypothesisViolation(RatHarmonicError):
    pass


class NumericalFailure(RatHarmonicError):
    pass


class DegreeTooLow(HypothesisViolation):
    pass


class CoincidentMasses(HypothesisViolation):
    pass


class NotCoprime(HypothesisViolation):
    pass


class DegreeZero(HypothesisViolation, ValueError):
    pass


class MaxIterationsExceeded(NumericalFailure):
    pass


class ContourTooClose(NumericalFailure):
    pass


class NonConvergentSampling(NumericalFailure):
    pass


class ResolutionTooCoarse(NumericalFailure):
    pass


class PoleAt(RatHarmonicError, ValueError):
    pass


class NotApplicable(RatHarmonicError):
    pass


class BoundViolation(RatHarmonicError):
    """A solve exceeded a proven bound; always indicates a solver defect."""
