"""Shared exception types.

Every loud failure mode in the library is one of these. Budget and cap
overruns always raise; nothing silently truncates a search.
"""


class MinorkitError(Exception):
    """Base class for all library errors."""


class SelfLoop(MinorkitError):
    """An edge joins a vertex to itself."""


class IndexOutOfRange(MinorkitError):
    """A vertex index is outside [0, n)."""


class PreconditionViolated(MinorkitError):
    """An operation's documented precondition does not hold."""


class SearchCapExceeded(MinorkitError):
    """An exact search was asked to run beyond its configured cap."""


class BudgetExceeded(MinorkitError):
    """An explicit work budget (states, multisets, nodes) ran out."""


class RootCountMismatch(MinorkitError):
    """Two rooted graphs disagree on the number of roots."""


class InvalidEmbedding(MinorkitError):
    """A rotation system fails validation or is not genus zero."""


class InvalidDecomposition(MinorkitError):
    """A tree decomposition fails validation."""


class InvalidLinkage(MinorkitError):
    """A claimed linkage does not validate in its host graph."""


class CertificateNotFound(MinorkitError):
    """No treewidth certificate of the requested kind was found."""


class NotTight(MinorkitError):
    """A well operation requires tight cycles and the input is not tight."""


class TerminalNotOnBoundary(MinorkitError):
    """A pattern terminal is not on the boundary cycle it must lie on."""


class ParameterTooSmall(MinorkitError):
    """A generator parameter is below its documented minimum."""


class GenerationCapExceeded(MinorkitError):
    """Exhaustive generation was asked to go beyond its feasible range."""


class FamilyTooSmall(MinorkitError):
    """A gadget family has fewer members than the construction needs."""


class VitalityValidationFailed(MinorkitError):
    """A construction's witness linkage provably failed its vitality check."""


class CliqueTooSmall(MinorkitError):
    """A clique minor model is below the order the reduction rule requires."""


class UsageError(MinorkitError):
    """Bad command line arguments."""
