"""Exact arithmetic foundation: GF(q), q-analogues, rational linear algebra."""

from .field import FiniteField, FieldError, gf, SUPPORTED_ORDERS
from .qarith import HalfInt, q_pow, gaussian_binomial, binom2, q_adic_valuation
from .linalg import (
    RationalMatrix,
    DimensionError,
    rref,
    rank,
    kernel_basis,
    in_column_space,
    matvec,
    columns,
    gf_rref,
    gf_rank,
    gf_kernel,
)

__all__ = [
    "FiniteField", "FieldError", "gf", "SUPPORTED_ORDERS",
    "HalfInt", "q_pow", "gaussian_binomial", "binom2", "q_adic_valuation",
    "RationalMatrix", "DimensionError", "rref", "rank", "kernel_basis",
    "in_column_space", "matvec", "columns", "gf_rref", "gf_rank", "gf_kernel",
]
