"""Exception types raised across the package."""


class HyperlatError(Exception):
    """Base class for all package errors."""


class MapError(HyperlatError, ValueError):
    """Malformed rotation system (asymmetric arcs, loops, unexpected multi-edges)."""


class NonPlanarRotation(MapError):
    """Rotation system whose face count violates Euler's formula."""


class Disconnected(MapError):
    """The root does not reach every vertex."""


class EmptySelection(HyperlatError, ValueError):
    pass


class BudgetExceeded(HyperlatError):
    """A construction or enumeration would exceed its configured budget."""


class TooCloseToRim(HyperlatError, ValueError):
    """A vertex set comes too close to the outermost layer of a finite patch."""


class NotAnInterface(HyperlatError, ValueError):
    pass


class NotTriangulable(HyperlatError):
    pass


class RegimeMismatch(HyperlatError, ValueError):
    """The host patch does not satisfy the degree/face conditions of a regime."""


class DomainError(HyperlatError, ValueError):
    pass
