"""Exception hierarchy shared across the package."""


class OpinionNetError(Exception):
    """Base class for all package errors."""


class GraphError(OpinionNetError):
    pass


class SelfLoopError(GraphError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"self-loop at vertex {vertex}")


class DuplicateEdgeError(GraphError):
    def __init__(self, i, k):
        self.i, self.k = i, k
        super().__init__(f"duplicate edge ({i}, {k})")


class IndexOutOfRangeError(GraphError):
    pass


class DimensionMismatchError(OpinionNetError):
    pass


class NotStronglyConnectedError(GraphError):
    pass


class NotBalancedError(GraphError):
    pass


class NotAllPositiveError(GraphError):
    pass


class NumericalError(OpinionNetError):
    pass


class NoRealDominantEigenvalueError(NumericalError):
    pass


class NoConvergenceError(NumericalError):
    pass


class NewtonSingularError(NumericalError):
    pass


class NonFiniteStateError(NumericalError):
    pass


class BisectionFailedError(NumericalError):
    pass


class InvalidParamsError(OpinionNetError):
    pass


class DegenerateDirectionError(OpinionNetError):
    pass


class HeterogeneousUError(OpinionNetError):
    """Analysis operations require a homogeneous attention level."""


class PreconditionViolatedError(OpinionNetError):
    pass


class OutsideBistableWindowError(OpinionNetError):
    pass


class AssumptionViolatedError(OpinionNetError):
    pass


class UnknownAgentError(OpinionNetError):
    pass


class ConfigError(OpinionNetError):
    """Scenario / CLI configuration problem; carries a field path."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")
