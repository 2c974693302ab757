"""Exception hierarchy shared by every module of the package."""


class HierError(Exception):
    """Base class for all errors raised by :mod:`hiermodel`."""


class FormatError(HierError):
    """Unreadable or malformed input data (JSON files, slope strings, ...)."""


class CatalogError(HierError):
    """A curve catalog is inconsistent or lacks data an operation needs."""


class Unreachable(HierError):
    """Two curves (or skeleton nodes) lie in different components of a finite graph."""


class NotFoundInCatalog(CatalogError):
    """No tight geodesic exists among the curves of a finite catalog."""


class GeometryError(HierError):
    """Degenerate intervals or overlapping annuli."""


class StageBoundExceeded(HierError):
    """The hierarchy splitting loop ran for more than xi(S) - 1 rounds."""


class PreconditionViolated(HierError):
    """An operation was called outside its declared domain."""


class DomainError(HierError):
    """A constant formula was given a non-positive input."""


class SpecError(HierError):
    """Boundary-brick specifications are missing or do not match the hierarchy."""


class NoConvergence(HierError):
    """The tube-metric solve failed its round-trip residual check."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
