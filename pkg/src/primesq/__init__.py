"""Numerical companion to a conditional mean-square bound for n = p + m^2."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .arith import SieveTables, build_sieve, is_square, legendre_symbol
from .errors import (
    ConsistencyError,
    InvalidArgument,
    NumericalError,
    PreconditionError,
    PrimesqError,
    ResourceError,
)

__all__ = [
    "__version__", "BACKEND", "SieveTables", "build_sieve", "is_square", "legendre_symbol",
    "PrimesqError", "InvalidArgument", "PreconditionError", "ResourceError", "NumericalError",
    "ConsistencyError",
]
