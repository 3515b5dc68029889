"""Exception types shared across the package."""


class HeisextError(Exception):
    """Base class for all package errors."""


class DimensionError(HeisextError, ValueError):
    """Operands have incompatible or non-square shapes."""


class NumericalError(HeisextError, RuntimeError):
    """A numerical routine failed to converge; message carries a residual report."""


class InvalidParamsError(HeisextError, ValueError):
    """Dilation parameters violate a precondition of the requested operation."""


class CertificateError(HeisextError, ValueError):
    """An isomorphism certificate is malformed or fails its defining relations."""


class MapPreconditionError(HeisextError, ValueError):
    """Data supplied for a structure-preserving map fails its hypothesis."""


class DomainError(HeisextError, ValueError):
    """A point lies outside the domain of the requested map."""


class SupportTagError(HeisextError, ValueError):
    """A function's half-space support tag does not match the operator's domain."""
