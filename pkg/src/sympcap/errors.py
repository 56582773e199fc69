"""Exception hierarchy shared by all sympcap modules."""


class SympcapError(Exception):
    """Base class for errors raised by this package."""


class RepresentationError(SympcapError, ValueError):
    """A body representation is invalid (e.g. origin not interior)."""


class SymmetryError(SympcapError, ValueError):
    """An operation requiring a centrally symmetric body got a non-symmetric one."""


class DomainError(SympcapError, ValueError):
    """An argument lies outside the domain of an operation."""


class NormalizationError(SympcapError, ValueError):
    """A vector pair does not satisfy |omega(w, v)| = 1."""


class RankError(SympcapError, ValueError):
    """Vectors that must be independent are (numerically) dependent."""


class SizeError(SympcapError, ValueError):
    """A configured size limit (vertex enumeration, sampling) is exceeded."""


class SmoothnessError(SympcapError, TypeError):
    """A gradient or flow was requested for a non-smooth representation."""


class ClosureError(SympcapError, ValueError):
    """A discretized loop does not close within tolerance."""


class NonClosureError(SympcapError, RuntimeError):
    """A shooting trajectory never returned to its section."""


class RefinementError(SympcapError, RuntimeError):
    """Newton refinement of a periodic orbit failed to converge."""


class EstimationError(SympcapError, RuntimeError):
    """Every shot of an estimator failed."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or []


class LemmaViolation(SympcapError, AssertionError):
    """A numerical check of a proven statement failed (signals a broken input)."""


class LPError(SympcapError, RuntimeError):
    """A linear program is infeasible or unbounded where it should not be."""


class BodySpecError(SympcapError, ValueError):
    """A body-spec document could not be turned into a body.

    ``code`` is one of ``"schema"``, ``"asymmetric"`` or ``"origin_exterior"``.
    """

    def __init__(self, message, code="schema"):
        super().__init__(message)
        self.code = code
