"""Exception hierarchy."""


class EwlError(Exception):
    """Base class for all package errors."""


class DomainError(EwlError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConsistencyError(EwlError, RuntimeError):
    """A reconstructed quantity violates an identity it must satisfy."""


class ContractError(EwlError, ValueError):
    """An input violates a structural contract (e.g. improper transform)."""


class ClusteredRootsError(EwlError, ArithmeticError):
    """Near-coincident poles could not be resolved into a multiplicity.

    The offending cluster is kept on ``cluster``.
    """

    def __init__(self, message, cluster=()):
        super().__init__(message)
        self.cluster = tuple(cluster)


class ConjugatePairError(EwlError, ArithmeticError):
    """An exponential sum expected to be real has a large imaginary part."""


class StabilityError(EwlError, ArithmeticError):
    """Final-value theorem requested for a transform without a limit."""


class SpanError(EwlError, ValueError):
    """An initial state cannot be written in the propagator basis."""


class NumericalFailure(EwlError, ArithmeticError):
    """An oracle computation produced a result outside its error budget."""


class ResolutionError(EwlError, ValueError):
    """A sampled series is too coarse for reliable event detection."""
