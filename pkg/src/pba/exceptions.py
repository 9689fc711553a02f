"""Exception types shared across the package."""


class PBAError(Exception):
    """Base class for every error this package raises on purpose."""


class ZeroMatrixError(PBAError, ValueError):
    """A rank-1 factorization was requested for an all-zero matrix."""


class GeometryMismatchError(PBAError, ValueError):
    """Patch geometry does not agree with the image or patch matrix."""


class NotNormalizedError(PBAError, ValueError):
    """Dictionary atoms must carry unit l2 norm."""


class EmptyDataError(PBAError, ValueError):
    """An operation that needs at least one sample received none."""


class BasisSizeError(PBAError, ValueError):
    """Requested principal basis size lies outside [1, n_atoms]."""


class DimensionMismatchError(PBAError, ValueError):
    """Two images that must share a shape do not."""


class ImageTooSmallError(PBAError, ValueError):
    """Image is smaller than the analysis window."""


class NegativeInputError(PBAError, ValueError):
    """Multiplicative noise needs a nonnegative input image."""


class PgmError(OSError):
    """Malformed or unsupported PGM file."""
