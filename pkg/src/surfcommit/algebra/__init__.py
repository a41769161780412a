"""Exact arithmetic: finite fields, univariate and homogeneous polynomials."""

from surfcommit.algebra.field import (
    GF,
    Embedding,
    Field,
    FieldElement,
    extension_for,
    field_extend,
    field_of_order,
    prime_power,
)
from surfcommit.algebra.mpoly import HomogPoly, monomial_basis
from surfcommit.algebra.upoly import NEG_INF, UniPoly

__all__ = [
    "GF",
    "Embedding",
    "Field",
    "FieldElement",
    "HomogPoly",
    "NEG_INF",
    "UniPoly",
    "extension_for",
    "field_extend",
    "field_of_order",
    "monomial_basis",
    "prime_power",
]
