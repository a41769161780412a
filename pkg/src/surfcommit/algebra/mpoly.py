"""Homogeneous polynomials in x0, x1, x2, x3 over a finite field."""

from __future__ import annotations

import functools
from math import comb

import numpy as np

from surfcommit.algebra.field import Embedding, Field, FieldElement
from surfcommit.algebra.upoly import UniPoly
from surfcommit.errors import FieldMismatch, InvalidDegree, ValidationError

NVARS = 4


@functools.lru_cache(maxsize=None)
def _monomials(d: int) -> tuple[tuple[int, int, int, int], ...]:
    out = []
    for e0 in range(d, -1, -1):
        for e1 in range(d - e0, -1, -1):
            for e2 in range(d - e0 - e1, -1, -1):
                out.append((e0, e1, e2, d - e0 - e1 - e2))
    return tuple(out)


def monomial_basis(d: int) -> tuple[tuple[int, int, int, int], ...]:
    """Exponent tuples of degree d in canonical order (descending lex).

    This order is the serialization order of surface coefficients.
    """
    if d < 1:
        raise InvalidDegree("surface degree must be at least 1")
    basis = _monomials(d)
    assert len(basis) == comb(d + 3, 3)
    return basis


@functools.lru_cache(maxsize=None)
def monomial_index(d: int) -> dict:
    return {e: i for i, e in enumerate(_monomials(d))}


class HomogPoly:
    """Sparse homogeneous form: ``terms`` maps exponent tuples to field ints."""

    __slots__ = ("field", "degree", "terms")

    def __init__(self, field: Field, degree: int, terms=None):
        self.field = field
        self.degree = degree
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != NVARS or sum(exps) != degree or min(exps) < 0:
                raise ValidationError(f"monomial {exps} is not of degree {degree} in 4 variables")
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise FieldMismatch("coefficient from another field")
                c = c.value
            if c:
                clean[exps] = c
        self.terms = clean

    @classmethod
    def from_vector(cls, field: Field, d: int, vector) -> "HomogPoly":
        """Build from coefficient ints listed in canonical monomial order."""
        basis = _monomials(d)
        if len(vector) != len(basis):
            raise ValidationError(f"expected {len(basis)} coefficients, got {len(vector)}")
        obj = cls.__new__(cls)
        obj.field = field
        obj.degree = d
        obj.terms = {e: int(c) for e, c in zip(basis, vector) if c}
        return obj

    @classmethod
    def variable(cls, field: Field, i: int) -> "HomogPoly":
        e = [0, 0, 0, 0]
        e[i] = 1
        return cls(field, 1, {tuple(e): 1})

    def to_vector(self) -> list[int]:
        return [self.terms.get(e, 0) for e in _monomials(self.degree)]

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps) -> FieldElement:
        return FieldElement(self.field, self.terms.get(tuple(exps), 0))

    def __eq__(self, other):
        return (
            isinstance(other, HomogPoly)
            and self.field == other.field
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.degree, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in _monomials(self.degree):
            c = self.terms.get(e)
            if c:
                mono = "*".join(f"x{i}^{k}" if k > 1 else f"x{i}" for i, k in enumerate(e) if k)
                parts.append(f"{FieldElement(self.field, c)!r}*{mono}" if mono else repr(FieldElement(self.field, c)))
        return " + ".join(parts)

    # -- linear structure -------------------------------------------------------

    def _same(self, other):
        if other.field != self.field:
            raise FieldMismatch("forms over different fields")
        if other.degree != self.degree:
            raise ValidationError("forms of different degree")

    def __add__(self, other):
        self._same(other)
        F = self.field
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = F.add(terms.get(e, 0), c)
        return HomogPoly(F, self.degree, terms)

    def __neg__(self):
        F = self.field
        return HomogPoly(F, self.degree, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "HomogPoly":
        F = self.field
        c = F(c).value
        return HomogPoly(F, self.degree, {e: F.mul(c, v) for e, v in self.terms.items()})

    def __mul__(self, other: "HomogPoly") -> "HomogPoly":
        F = self.field
        if other.field != F:
            raise FieldMismatch("forms over different fields")
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                terms[e] = F.add(terms.get(e, 0), F.mul(c1, c2))
        return HomogPoly(F, self.degree + other.degree, terms)

    # -- calculus and substitution --------------------------------------------------

    def partial(self, i: int) -> "HomogPoly":
        """Formal derivative in x_i (coefficients reduced mod p)."""
        F = self.field
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                v = F.mul(F.scalar(e[i]), c)
                if v:
                    ne = list(e)
                    ne[i] -= 1
                    terms[tuple(ne)] = v
        out = HomogPoly.__new__(HomogPoly)
        out.field = F
        out.degree = self.degree - 1
        out.terms = terms
        return out

    def partials(self) -> list["HomogPoly"]:
        return [self.partial(i) for i in range(NVARS)]

    def evaluate(self, point) -> int:
        """Value at a point given as four ints (or FieldElements) of this field."""
        F = self.field
        pt = [x.value if isinstance(x, FieldElement) else x for x in point]
        acc = 0
        for e, c in self.terms.items():
            v = c
            for x, k in zip(pt, e):
                if k:
                    v = F.mul(v, F.pow(x, k))
            acc = F.add(acc, v)
        return acc

    def embed(self, embedding: Embedding) -> "HomogPoly":
        if embedding.base != self.field:
            raise FieldMismatch("embedding base differs from coefficient field")
        out = HomogPoly.__new__(HomogPoly)
        out.field = embedding.target
        out.degree = self.degree
        out.terms = {e: embedding.map_int(c) for e, c in self.terms.items()}
        return out

    def substitute(self, curve) -> UniPoly:
        """F(f0(t), f1(t), f2(t), f3(t)) for four UniPoly over the same field."""
        curve = list(curve)
        if len(curve) != NVARS:
            raise ValidationError("need exactly four polynomials")
        F = self.field
        for f in curve:
            if f.field != F:
                raise FieldMismatch("curve and form live over different fields")
        powers = [_power_table(f, self.degree) for f in curve]
        acc = UniPoly(F, [])
        for e, c in self.terms.items():
            term = UniPoly(F, [c])
            for i, k in enumerate(e):
                if k:
                    term = term * powers[i][k]
            acc = acc + term
        return acc

    def evaluate_arrays(self, xs, field: Field | None = None) -> np.ndarray:
        """Vectorised value on four broadcastable int arrays over ``field``.

        Coefficients must already live in ``field`` (use ``embed`` first).
        """
        F = field or self.field
        xs = [F.asarray(x) for x in xs]
        shape = np.broadcast_shapes(*(x.shape for x in xs))
        powers: dict = {}
        acc = np.zeros(shape, dtype=np.int64)
        for e, c in self.terms.items():
            v = None
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in powers:
                        powers[(i, k)] = F.vpow(xs[i], k)
                    v = powers[(i, k)] if v is None else F.vmul(v, powers[(i, k)])
            if v is None:
                v = np.full(shape, c, dtype=np.int64)
            elif c != 1:
                v = F.vmul(v, c)
            acc = F.vadd(acc, v)
        return np.broadcast_to(acc, shape)


def _power_table(f: UniPoly, d: int) -> list[UniPoly]:
    table = [UniPoly(f.field, [1])]
    for _ in range(d):
        table.append(table[-1] * f)
    return table


def monomial_substitutions(curve, d: int) -> list[UniPoly]:
    """Substitution of each canonical degree-d monomial into the curve."""
    curve = list(curve)
    powers = [_power_table(f, d) for f in curve]
    out = []
    cache: dict = {}
    for e in _monomials(d):
        key12 = (e[0], e[1])
        if key12 not in cache:
            cache[key12] = powers[0][e[0]] * powers[1][e[1]]
        out.append(cache[key12] * powers[2][e[2]] * powers[3][e[3]])
    return out
