"""Univariate polynomials over a finite field."""

from __future__ import annotations

import random

import numpy as np

from surfcommit.algebra.field import Embedding, Field, FieldElement
from surfcommit.errors import DivisionByZero, FieldMismatch, Undefined

NEG_INF = float("-inf")


class UniPoly:
    """Polynomial in t with coefficients in ``field``, ascending degree.

    Coefficients are held as field ints; ``coeffs`` exposes them as
    ``FieldElement``.  The zero polynomial has degree ``NEG_INF``.
    """

    __slots__ = ("field", "_c")

    def __init__(self, field: Field, coeffs=()):
        self.field = field
        c = []
        for x in coeffs:
            if isinstance(x, FieldElement):
                if x.field != field:
                    raise FieldMismatch(f"{x.field} coefficient in a polynomial over {field}")
                c.append(x.value)
            else:
                c.append(x)
        while c and c[-1] == 0:
            c.pop()
        self._c = c

    @classmethod
    def _raw(cls, field, c):
        obj = cls.__new__(cls)
        obj.field = field
        while c and c[-1] == 0:
            c.pop()
        obj._c = c
        return obj

    @classmethod
    def monomial(cls, field, n, coeff=1):
        return cls._raw(field, [0] * n + [coeff])

    @classmethod
    def t(cls, field):
        return cls._raw(field, [0, 1])

    # -- basic accessors -------------------------------------------------------

    @property
    def ints(self) -> list[int]:
        return list(self._c)

    @property
    def coeffs(self) -> list[FieldElement]:
        return [FieldElement(self.field, v) for v in self._c]

    def coeff(self, i: int) -> int:
        return self._c[i] if 0 <= i < len(self._c) else 0

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else NEG_INF

    def is_zero(self) -> bool:
        return not self._c

    def lead(self) -> int:
        return self._c[-1] if self._c else 0

    def __eq__(self, other):
        return isinstance(other, UniPoly) and self.field == other.field and self._c == other._c

    def __hash__(self):
        return hash((self.field, tuple(self._c)))

    def __repr__(self):
        if not self._c:
            return "0"
        terms = []
        for i, v in enumerate(self._c):
            if v:
                c = repr(FieldElement(self.field, v))
                terms.append(c if i == 0 else f"{c}*t^{i}")
        return " + ".join(terms)

    def _check(self, other):
        if not isinstance(other, UniPoly):
            raise TypeError("expected UniPoly")
        if other.field != self.field:
            raise FieldMismatch("polynomials over different fields")

    # -- ring operations ---------------------------------------------------------

    def __add__(self, other):
        self._check(other)
        F = self.field
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = F.add(out[i], v)
        return UniPoly._raw(F, out)

    def __neg__(self):
        F = self.field
        return UniPoly._raw(F, [F.neg(v) for v in self._c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        if isinstance(other, FieldElement):
            other = UniPoly(F, [other])
        self._check(other)
        a, b = self._c, other._c
        if not a or not b:
            return UniPoly._raw(F, [])
        if F.k == 1:
            p = F.p
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return UniPoly._raw(F, [v % p for v in out])
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return UniPoly._raw(F, out)

    def scale(self, c: int):
        F = self.field
        return UniPoly._raw(F, [F.mul(c, v) for v in self._c])

    def __pow__(self, e: int):
        result = UniPoly._raw(self.field, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divmod(self, other):
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        F = self.field
        a = list(self._c)
        b = other._c
        db = len(b) - 1
        inv = F.inv(b[-1])
        if len(a) - 1 < db:
            return UniPoly._raw(F, []), UniPoly._raw(F, a)
        q = [0] * (len(a) - db)
        for i in range(len(a) - 1 - db, -1, -1):
            c = F.mul(a[i + db], inv)
            q[i] = c
            if c:
                for j, y in enumerate(b):
                    if y:
                        a[i + j] = F.sub(a[i + j], F.mul(c, y))
        return UniPoly._raw(F, q), UniPoly._raw(F, a[:db])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self):
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead()))

    def gcd(self, other):
        """Monic gcd; gcd(0, 0) is undefined."""
        self._check(other)
        if self.is_zero() and other.is_zero():
            raise Undefined("gcd(0, 0) is undefined")
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self):
        F = self.field
        return UniPoly._raw(F, [F.mul(F.scalar(i), v) for i, v in enumerate(self._c)][1:])

    def compose(self, g):
        """self(g(t))."""
        self._check(g)
        acc = UniPoly._raw(self.field, [])
        for v in reversed(self._c):
            acc = acc * g + UniPoly._raw(self.field, [v])
        return acc

    def powmod(self, e: int, m):
        result = UniPoly._raw(self.field, [1]) % m
        base = self % m
        while e:
            if e & 1:
                result = (result * base) % m
            e >>= 1
            if e:
                base = (base * base) % m
        return result

    # -- evaluation ----------------------------------------------------------------

    def eval(self, x, embedding: Embedding | None = None):
        """Evaluate at x in this field, or in an extension via ``embedding``.

        ``x`` may be a FieldElement or a raw int of the target field; the
        result has the same form.
        """
        raw = isinstance(x, (int, np.integer))
        if raw:
            x = int(x)
        if isinstance(x, FieldElement):
            target = x.field
            xv = x.value
        else:
            target = embedding.target if embedding is not None else self.field
            xv = x
        if embedding is None:
            if target != self.field:
                raise FieldMismatch("evaluation point lies in another field; pass an embedding")
            coeffs = self._c
        else:
            if embedding.base != self.field or embedding.target != target:
                raise FieldMismatch("embedding does not match")
            coeffs = [embedding.map_int(v) for v in self._c]
        acc = 0
        for c in reversed(coeffs):
            acc = target.add(target.mul(acc, xv), c)
        return acc if raw else FieldElement(target, acc)

    def eval_array(self, xs: np.ndarray, embedding: Embedding | None = None) -> np.ndarray:
        target = embedding.target if embedding is not None else self.field
        coeffs = self._c if embedding is None else [embedding.map_int(v) for v in self._c]
        acc = np.zeros_like(xs)
        for c in reversed(coeffs):
            acc = target.vadd(target.vmul(acc, xs), c)
        return acc

    def embed(self, embedding: Embedding):
        return UniPoly._raw(embedding.target, [embedding.map_int(v) for v in self._c])

    # -- roots -----------------------------------------------------------------------

    def roots(self, seed: int = 0) -> list[int]:
        """Distinct roots in this field (as ints), sorted; Cantor-Zassenhaus."""
        if self.is_zero():
            raise Undefined("every element is a root of the zero polynomial")
        F = self.field
        if self.degree <= 0:
            return []
        f = self.monic()
        x = UniPoly.t(F)
        g = f.gcd(x.powmod(F.q, f) - x)
        rng = random.Random(seed)
        found: list[int] = []
        stack = [g]
        while stack:
            h = stack.pop()
            if h.degree <= 0:
                continue
            if h.degree == 1:
                found.append(F.neg(h.coeff(0)))
                continue
            while True:
                a = rng.randrange(F.q)
                if F.p == 2:
                    z = UniPoly._raw(F, [0, a]) % h
                    acc = z
                    for _ in range(F.k - 1):
                        z = (z * z) % h
                        acc = acc + z
                    s = h.gcd(acc) if not acc.is_zero() else h
                else:
                    w = UniPoly._raw(F, [a, 1]).powmod((F.q - 1) // 2, h)
                    w = w - UniPoly._raw(F, [1])
                    s = h.gcd(w) if not w.is_zero() else h
                if 0 < s.degree < h.degree:
                    stack.append(s)
                    stack.append(h // s)
                    break
        return sorted(found)
