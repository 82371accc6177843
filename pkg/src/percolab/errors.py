"""Exception hierarchy shared by every percolab module."""


class PercolabError(Exception):
    """Base class for all errors raised by percolab."""


class GraphError(PercolabError, ValueError):
    pass


class NotRegular(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class OddDegreeSum(GraphError):
    pass


class VertexOutOfRange(GraphError, IndexError):
    pass


class GraphFormatError(GraphError):
    pass


class GeneratorError(PercolabError, ValueError):
    pass


class DegreeTooLarge(GeneratorError):
    pass


class RetryLimitExceeded(GeneratorError, RuntimeError):
    pass


class NotPrime(GeneratorError):
    pass


class WrongResidueClass(GeneratorError):
    pass


class UnknownFamily(GeneratorError):
    pass


class SpectralError(PercolabError):
    pass


class NotConverged(SpectralError, RuntimeError):
    """Power iteration hit ``max_iter``; ``estimate`` holds the best value."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class Disconnected(SpectralError, ValueError):
    pass


class PercolationError(PercolabError, ValueError):
    pass


class ProbabilityOutOfRange(PercolationError):
    pass


class TooManyEdges(PercolationError):
    pass


class AlphaTooLarge(PercolationError):
    pass


class CensusError(PercolabError, ValueError):
    pass


class SampleGraphMismatch(CensusError):
    pass


class KTooLarge(CensusError):
    pass


class TheoryError(PercolabError, ValueError):
    pass


class AlphaNotSupercritical(TheoryError):
    pass


class AlphaCritical(TheoryError):
    pass


class KTooLargeForBound(TheoryError):
    pass


class NTooSmall(TheoryError):
    pass


class WindowEmpty(TheoryError):
    pass


class ConfigInvalid(PercolabError, ValueError):
    pass
