"""Exact-arithmetic workbench for toroidal Hecke modules and their dual current algebra."""

from .params import Params, ParameterError, specialized_params, symbolic_params
from .scalars import Laurent, LaurentFrac, Scalar

__all__ = [
    "Laurent",
    "LaurentFrac",
    "Params",
    "ParameterError",
    "Scalar",
    "specialized_params",
    "symbolic_params",
]
