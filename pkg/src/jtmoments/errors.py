"""Exception hierarchy shared across the package."""


class JTMomentsError(Exception):
    """Base class for every error raised by this package."""


class ScopeError(JTMomentsError, ValueError):
    """A scope is malformed, or an operation got an incompatible scope."""


class DomainError(JTMomentsError, ValueError):
    """A value lies outside the domain an operation accepts (e.g. negative p)."""


class ModelError(JTMomentsError, ValueError):
    """A model, model file or junction tree is inconsistent."""


class QueryError(JTMomentsError, ValueError):
    """A query cannot be answered on the given tree."""


class ProtocolError(JTMomentsError, RuntimeError):
    """The mailbox protocol was violated; always indicates a scheduler bug."""


class EnumerationCapExceeded(JTMomentsError, RuntimeError):
    """Brute-force enumeration refused because the joint space is too large."""
