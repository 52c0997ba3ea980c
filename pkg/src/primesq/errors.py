"""Exception hierarchy shared by every module and mapped to CLI exit codes."""


class PrimesqError(Exception):
    """Base class for all errors raised by primesq."""


class InvalidArgument(PrimesqError, ValueError):
    """An argument is outside the domain of the operation."""


class PreconditionError(PrimesqError, ValueError):
    """Inputs are valid but insufficient, e.g. a sieve table that is too short."""


class ResourceError(PrimesqError, MemoryError):
    """The request exceeds the configured memory budget."""


class NumericalError(PrimesqError, ArithmeticError):
    """A numerical procedure (usually a quadrature) failed to converge."""


class ConsistencyError(PrimesqError, RuntimeError):
    """An internal invariant was violated."""
