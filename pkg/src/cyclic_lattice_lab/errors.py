"""Exception hierarchy.

Every error raised by the library derives from :class:`CyclicLatticeError`
so callers (notably the CLI) can map them to a single exit code.
"""


class CyclicLatticeError(ValueError):
    pass


class NonIncreasingParameters(CyclicLatticeError):
    pass


class TooFewVertices(CyclicLatticeError):
    pass


class BadSubset(CyclicLatticeError):
    pass


class DimensionMismatch(CyclicLatticeError):
    pass


class InstanceTooLarge(CyclicLatticeError):
    pass


class EmptySet(CyclicLatticeError):
    pass


class IntegralityViolation(CyclicLatticeError):
    """An exact computation produced a non-integer where theory forbids it."""


class BadPivot(CyclicLatticeError):
    pass


class DuplicateIndex(CyclicLatticeError):
    pass


class SamplingExhausted(CyclicLatticeError):
    pass


class UnsortedInput(CyclicLatticeError):
    pass


class OutOfRange(CyclicLatticeError):
    pass


class GuaranteeViolated(CyclicLatticeError):
    """Heavy-subset search failed; would contradict the heavy-subset guarantee."""


class NoSolution(CyclicLatticeError):
    pass


class HypothesisViolated(CyclicLatticeError):
    pass


class WitnessRefuted(CyclicLatticeError):
    pass


class NotAFacet(CyclicLatticeError):
    pass
