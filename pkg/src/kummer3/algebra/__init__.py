"""Exact arithmetic substrate: fields, polynomials, linear algebra, CRT."""

from . import poly
from .fields import QQ, BadCharacteristic, PrimeField, Rationals, field_from_json, is_prime
from .linalg import (
    Matrix,
    echelon_basis,
    left_nullspace,
    nullspace,
    rank,
    rref,
    span_rank,
)
from .modular import NoReconstruction, crt, random_prime, rational_reconstruct, reconstruct
from .poly import MPoly

__all__ = [
    "BadCharacteristic",
    "MPoly",
    "Matrix",
    "NoReconstruction",
    "PrimeField",
    "QQ",
    "Rationals",
    "crt",
    "echelon_basis",
    "field_from_json",
    "is_prime",
    "left_nullspace",
    "nullspace",
    "poly",
    "random_prime",
    "rank",
    "rational_reconstruct",
    "reconstruct",
    "rref",
    "span_rank",
]
