"""Exception hierarchy shared by every module of the package."""


class HypergraphError(ValueError):
    """Base class for all domain errors."""


class EmptyEdge(HypergraphError):
    pass


class UncoveredVertex(HypergraphError):
    def __init__(self, vertex):
        super().__init__(f"vertex {vertex} lies in no edge")
        self.vertex = vertex


class UnknownVertexInEdge(HypergraphError):
    pass


class EmptyVertexSet(HypergraphError):
    pass


class EmptyEdgeSet(HypergraphError):
    pass


class UnknownTarget(HypergraphError):
    pass


class ResultEmpty(HypergraphError):
    pass


class InstanceTooLarge(HypergraphError):
    pass


class NotBalanced(HypergraphError):
    def __init__(self, message="hypergraph is not balanced", witness=None):
        super().__init__(message)
        self.witness = witness


class SearchExhausted(HypergraphError):
    pass


class MatchingCoversForbiddenVertex(HypergraphError):
    pass


class NotAMatching(HypergraphError):
    pass


class GenerationFailed(HypergraphError):
    pass


class ParseError(HypergraphError):
    pass


class UsageError(HypergraphError):
    pass


class VerificationFailure(HypergraphError):
    """A theorem-level check failed on an input where it must hold."""

    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}
