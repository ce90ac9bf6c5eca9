"""Exception hierarchy shared by all trotterkit modules."""


class TrotterKitError(Exception):
    """Base class for library errors."""


class DimensionError(TrotterKitError, ValueError):
    """Operands act on different numbers of sites or exceed a size cap."""


class DomainError(TrotterKitError, ValueError):
    """An argument lies outside the domain of an operation."""


class CapabilityError(TrotterKitError):
    """A configured depth or size limit was exceeded."""


class NumericError(TrotterKitError, ArithmeticError):
    """A numerical routine failed to converge or produced an invalid value."""
