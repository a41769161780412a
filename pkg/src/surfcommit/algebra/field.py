"""Finite fields F_{p^k} with exact arithmetic.

Elements are stored as Python ints in [0, q): the integer sum(c_i * p^i) of
their polynomial-basis residues.  Scalar operations work on those ints
directly (``F.mul(a, b)``); ``FieldElement`` wraps one for operator syntax.
The ``v*`` methods apply the same operations elementwise to numpy arrays and
drive the exhaustive enumeration kernels.

Extension fields up to ``TABLE_CAP`` elements use exp/log/Zech tables.
"""

from __future__ import annotations

import functools

import numpy as np

from surfcommit.algebra import fppoly
from surfcommit.errors import (
    CapacityExceeded,
    DivisionByZero,
    FieldMismatch,
    ValidationError,
)

MAX_PRIME = 2**61
MAX_ORDER = 2**62
ENUMERATION_CAP = 2**30
TABLE_CAP = 2**16
_INT64_PRIME = 2**31


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for s in small:
        if n % s == 0:
            return n == s
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factor_small(n: int) -> list[int]:
    primes = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            primes.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        primes.append(n)
    return primes


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^k; raises ValidationError if q is not a prime power."""
    if q < 2:
        raise ValidationError(f"{q} is not a prime power")
    for k in range(q.bit_length(), 0, -1):
        p = round(q ** (1.0 / k))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand**k == q and is_prime(cand):
                return cand, k
    raise ValidationError(f"{q} is not a prime power")


class Field:
    """The finite field F_{p^k} = F_p[x]/(modulus)."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not (2 <= p < MAX_PRIME) or not is_prime(p):
            raise ValidationError(f"p={p} is not a prime below 2^61")
        if k < 1:
            raise ValidationError("extension degree must be >= 1")
        if p**k > MAX_ORDER:
            raise CapacityExceeded(f"field of order {p}^{k} exceeds the word-size budget")
        self.p = p
        self.k = k
        self.q = p**k
        if modulus is None:
            modulus = fppoly.lowest_irreducible(p, k)
        modulus = [c % p for c in modulus]
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValidationError("modulus must be monic of degree k")
        if k > 1 and not fppoly.is_irreducible(modulus, p):
            raise ValidationError(f"modulus {modulus} is reducible over F_{p}")
        self.modulus = tuple(modulus)
        self._tables = None
        if k > 1 and self.q <= TABLE_CAP:
            self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def _encode(self, digits) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _poly_mul(self, a: int, b: int) -> int:
        prod = fppoly.mul(fppoly.trim(self._digits(a)), fppoly.trim(self._digits(b)), self.p)
        return self._encode(fppoly.mod(prod, list(self.modulus), self.p))

    def _poly_pow(self, a: int, e: int) -> int:
        r = fppoly.powmod(fppoly.trim(self._digits(a)), e, list(self.modulus), self.p)
        return self._encode(r)

    def _build_tables(self):
        q, p = self.q, self.p
        order = q - 1
        factors = _factor_small(order)
        gen = None
        for g in range(p, q):
            if all(self._poly_pow(g, order // f) != 1 for f in factors):
                gen = g
                break
        # multiplication by gen is F_p-linear: precompute images of the basis
        cols = [self._poly_mul(p**i, gen) for i in range(self.k)]
        col_digits = [self._digits(c) for c in cols]
        exp = [0] * order
        v = 1
        for i in range(order):
            exp[i] = v
            d = self._digits(v)
            acc = [0] * self.k
            for j, c in enumerate(d):
                if c:
                    cd = col_digits[j]
                    for t in range(self.k):
                        acc[t] += c * cd[t]
            v = self._encode([x % p for x in acc])
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        exp_np = np.array(exp, dtype=np.int64)
        log_np = np.array(log, dtype=np.int64)
        c0 = exp_np % p
        one_plus = exp_np - c0 + (c0 + 1) % p
        zech = np.where(one_plus == 0, -1, log_np[one_plus])
        self.generator = gen
        self._tables = (exp, log, zech.tolist(), exp_np, log_np, zech)

    # -- identity -------------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (_rebuild, (self.p, self.k, self.modulus))

    @property
    def label(self) -> str:
        return f"{self.p}^{self.k}"

    # -- element constructors ---------------------------------------------------

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element given to {self}")
            return value
        return FieldElement(self, value % self.p)

    def from_coeffs(self, coeffs) -> "FieldElement":
        coeffs = list(coeffs)
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise ValidationError(f"need {self.k} residues in [0, {self.p})")
        return FieldElement(self, self._encode(coeffs))

    def element(self, value: int) -> "FieldElement":
        if not 0 <= value < self.q:
            raise ValidationError(f"{value} out of range for {self}")
        return FieldElement(self, value)

    @property
    def zero(self):
        return FieldElement(self, 0)

    @property
    def one(self):
        return FieldElement(self, 1)

    def elements(self):
        if self.q > ENUMERATION_CAP:
            raise CapacityExceeded(f"refusing to enumerate {self.q} elements")
        return (FieldElement(self, v) for v in range(self.q))

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._digits(a))

    # -- scalar arithmetic on ints ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._tables is not None:
            if a == 0:
                return b
            if b == 0:
                return a
            exp, log, zech = self._tables[:3]
            la = log[a]
            z = zech[(log[b] - la) % (self.q - 1)]
            return 0 if z < 0 else exp[(la + z) % (self.q - 1)]
        p = self.p
        return self._encode([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        p = self.p
        return self._encode([(-x) % p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        if self._tables is not None:
            exp, log = self._tables[:2]
            return exp[(log[a] + log[b]) % (self.q - 1)]
        return self._poly_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"inverse of zero in {self}")
        if self.k == 1:
            return pow(a, -1, self.p)
        if self._tables is not None:
            exp, log = self._tables[:2]
            return exp[(-log[a]) % (self.q - 1)]
        return self._poly_pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.k == 1:
            return pow(a, e, self.p)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self._tables is not None:
            exp, log = self._tables[:2]
            return exp[(log[a] * e) % (self.q - 1)]
        return self._poly_pow(a, e)

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    def scalar(self, n: int) -> int:
        """Image of the integer n under Z -> F."""
        return n % self.p

    # -- vectorised arithmetic on int64 arrays ------------------------------------

    @property
    def vectorised(self) -> bool:
        """True when the v* methods run as native numpy int64 code."""
        return (self.k == 1 and self.p < _INT64_PRIME) or self._tables is not None

    def asarray(self, values):
        dtype = np.int64 if self.q < 2**63 and (self.k > 1 or self.p < _INT64_PRIME) else object
        return np.asarray(values, dtype=dtype)

    def vadd(self, a, b):
        if self.k == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        if self._tables is None:
            return _vectorise(self.add)(a, b)
        exp, log, zech = self._tables[3:]
        a, b = np.broadcast_arrays(a, b)
        la = log[a]
        z = zech[(log[b] - la) % (self.q - 1)]
        r = np.where(z < 0, 0, exp[(la + np.maximum(z, 0)) % (self.q - 1)])
        return np.where(a == 0, b, np.where(b == 0, a, r))

    def vneg(self, a):
        if self.k == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        if self._tables is None:
            return _vectorise(self.neg)(a)
        exp, log = self._tables[3:5]
        return np.where(a == 0, 0, exp[(log[a] + (self.q - 1) // 2) % (self.q - 1)])

    def vsub(self, a, b):
        if self.k == 1:
            return (a - b) % self.p
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b):
        if self.k == 1:
            return (a * b) % self.p
        if self._tables is None:
            return _vectorise(self.mul)(a, b)
        exp, log = self._tables[3:5]
        a, b = np.broadcast_arrays(a, b)
        r = exp[(log[a] + log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def vpow(self, a, e: int):
        a = np.asarray(a)
        if e == 0:
            return np.ones_like(a)
        if self._tables is not None:
            exp, log = self._tables[3:5]
            return np.where(a == 0, 0, exp[(log[a] * e) % (self.q - 1)])
        result = None
        base = a
        while e:
            if e & 1:
                result = base if result is None else self.vmul(result, base)
            e >>= 1
            if e:
                base = self.vmul(base, base)
        return result

    def vinv(self, a):
        if self._tables is not None:
            exp, log = self._tables[3:5]
            return exp[(-log[a]) % (self.q - 1)]
        return _vectorise(self.inv)(a)


def _vectorise(fn):
    # slow path for extension fields too large for tables; q < 2^63 always holds
    def wrapped(*arrays):
        ufunc = np.frompyfunc(lambda *xs: fn(*(int(x) for x in xs)), len(arrays), 1)
        return np.asarray(ufunc(*arrays)).astype(np.int64)

    return wrapped


@functools.lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> Field:
    """Cached field constructor with the canonical (lowest irreducible) modulus."""
    return Field(p, k)


def _rebuild(p, k, modulus):
    field = GF(p, k)
    return field if field.modulus == tuple(modulus) else Field(p, k, list(modulus))


def field_of_order(q: int) -> Field:
    return GF(*prime_power(q))


class FieldElement:
    """An element of a ``Field``, with operator arithmetic."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.field, self.field.div(self.value, o))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inv(self):
        return FieldElement(self.field, self.field.inv(self.value))

    def frobenius(self):
        return FieldElement(self.field, self.field.frobenius(self.value))

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.value))

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.value}"
        return "(" + ",".join(map(str, self.coeffs)) + ")"

    def serialize(self) -> str:
        return ",".join(map(str, self.coeffs))


class Embedding:
    """Injective ring homomorphism from ``base`` into ``target``.

    Determined by the image ``root`` of the base generator x, a root of the
    base modulus in the target field.
    """

    def __init__(self, base: Field, target: Field, root: int):
        self.base = base
        self.target = target
        self.root = root
        self._powers = [1]
        for _ in range(1, base.k):
            self._powers.append(target.mul(self._powers[-1], root))
        self._table = None

    def map_int(self, a: int) -> int:
        if self.base.k == 1:
            return a
        t = self.target
        acc = 0
        for c, pw in zip(self.base.coeffs(a), self._powers):
            if c:
                acc = t.add(acc, t.mul(c, pw))
        return acc

    def __call__(self, a):
        if isinstance(a, FieldElement):
            if a.field != self.base:
                raise FieldMismatch(f"embedding expects {self.base}")
            return FieldElement(self.target, self.map_int(a.value))
        return self.map_int(a)

    def table(self) -> np.ndarray:
        """Images of all base elements, indexed by their int encoding."""
        if self._table is None:
            if self.base.q > ENUMERATION_CAP:
                raise CapacityExceeded("base field too large to tabulate")
            self._table = np.array([self.map_int(a) for a in range(self.base.q)], dtype=np.int64)
        return self._table

    def map_array(self, arr):
        if self.base.k == 1:
            return arr
        return self.table()[arr]


@functools.lru_cache(maxsize=256)
def field_extend(base: Field, j: int) -> tuple[Field, Embedding]:
    """Return F_{p^{k j}} (canonical modulus) and the embedding of ``base`` into it."""
    if j < 1:
        raise ValidationError("extension degree must be >= 1")
    if j == 1:
        return base, Embedding(base, base, base.p if base.k > 1 else 0)
    if base.p ** (base.k * j) > MAX_ORDER:
        raise CapacityExceeded(f"F_{base.p}^{base.k * j} exceeds the word-size budget")
    target = GF(base.p, base.k * j)
    if base.k == 1:
        return target, Embedding(base, target, 0)
    from surfcommit.algebra.upoly import UniPoly

    g = UniPoly(target, list(base.modulus))
    roots = g.roots()
    return target, Embedding(base, target, min(roots))


def extension_for(base: Field, minimum_size: int) -> tuple[Field, Embedding]:
    """Smallest extension F_{q^j} of ``base`` with at least ``minimum_size`` elements."""
    j = 1
    while base.q**j < minimum_size:
        j += 1
    return field_extend(base, j)
