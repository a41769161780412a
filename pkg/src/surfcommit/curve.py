"""Rational curves (f0:f1:f2:f3) in P^3 and the message encoding.

Coefficient position ``i*(m+1) + j`` holds the t^j coefficient of f_i.  A
byte string is mapped to an integer by the bijective length-aware ranking
``rank(b) = int(b) + (256^len(b) - 1)/255`` and then written big-endian in
base q into its slots, so encoding is injective on all byte strings.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from surfcommit.algebra.field import Embedding, Field, FieldElement, extension_for, field_extend
from surfcommit.algebra.linalg import rank
from surfcommit.algebra.upoly import UniPoly
from surfcommit.errors import (
    CapacityExceeded,
    DegenerateParameter,
    FieldMismatch,
    InvalidCurve,
    ValidationError,
)


def rank_bytes(data: bytes) -> int:
    return int.from_bytes(data, "big") + (256 ** len(data) - 1) // 255


def unrank_bytes(n: int) -> bytes:
    length = 0
    while (256 ** (length + 1) - 1) // 255 <= n:
        length += 1
    return (n - (256**length - 1) // 255).to_bytes(length, "big")


@dataclass(frozen=True)
class SchemeParams:
    field: Field
    d: int
    m: int
    message_slots: tuple[int, ...]
    randomness_slots: tuple[int, ...]

    def __post_init__(self):
        n = 4 * (self.m + 1)
        ms, rs = set(self.message_slots), set(self.randomness_slots)
        if self.m < 1 or self.d < 1:
            raise ValidationError("need m >= 1 and d >= 1")
        if ms & rs or ms | rs != set(range(n)):
            raise ValidationError("message and randomness slots must partition the coefficient positions")
        if len(ms) != len(self.message_slots) or len(rs) != len(self.randomness_slots):
            raise ValidationError("duplicate slot index")

    @classmethod
    def default(cls, field: Field, d: int, m: int) -> "SchemeParams":
        """Constant and leading coefficients carry randomness, the rest the message."""
        rand = tuple(sorted(i * (m + 1) + j for i in range(4) for j in {0, m}))
        msg = tuple(k for k in range(4 * (m + 1)) if k not in rand)
        return cls(field, d, m, msg, rand)

    @classmethod
    def all_randomness(cls, field: Field, d: int, m: int) -> "SchemeParams":
        return cls(field, d, m, (), tuple(range(4 * (m + 1))))

    def message_capacity(self) -> int:
        """Number of distinct messages that fit (rank must be below this)."""
        return self.field.q ** len(self.message_slots)

    def randomness_capacity(self) -> int:
        return self.field.q ** len(self.randomness_slots)


@dataclass(frozen=True)
class RationalCurve:
    f: tuple[UniPoly, UniPoly, UniPoly, UniPoly]
    m: int

    def __post_init__(self):
        if len(self.f) != 4:
            raise ValidationError("a curve in P^3 needs four coordinate polynomials")
        fields = {g.field for g in self.f}
        if len(fields) != 1:
            raise FieldMismatch("coordinate polynomials over different fields")
        if any(g.degree > self.m for g in self.f):
            raise ValidationError(f"coordinate of degree above the bound m={self.m}")

    @classmethod
    def from_ints(cls, field: Field, coeffs, m: int) -> "RationalCurve":
        return cls(tuple(UniPoly(field, c) for c in coeffs), m)

    @property
    def field(self) -> Field:
        return self.f[0].field

    def coefficient_vector(self) -> list[int]:
        return [g.coeff(j) for g in self.f for j in range(self.m + 1)]

    def coefficient_lists(self) -> list[list[int]]:
        return [[g.coeff(j) for j in range(self.m + 1)] for g in self.f]

    def derivative(self) -> "RationalCurve":
        return RationalCurve(tuple(g.derivative() for g in self.f), self.m)


def _digits(n: int, base: int, width: int) -> list[int]:
    out = [0] * width
    for i in range(width - 1, -1, -1):
        n, out[i] = divmod(n, base)
    return out


def _undigits(ds, base: int) -> int:
    n = 0
    for x in ds:
        n = n * base + x
    return n


def encode_message(
    message: bytes, randomness: bytes, params: SchemeParams, require_smooth: bool = True
) -> RationalCurve:
    """Write message and curve randomness into the slots and validate the curve.

    With ``require_smooth`` the parametrization must also be unramified on
    the sample, so the committed curve is a smooth rational curve.
    """
    q = params.field.q
    n = 4 * (params.m + 1)
    mr, rr = rank_bytes(message), rank_bytes(randomness)
    if mr >= params.message_capacity():
        raise CapacityExceeded(f"message of {len(message)} bytes does not fit {len(params.message_slots)} slots")
    if rr >= params.randomness_capacity():
        raise CapacityExceeded(f"randomness of {len(randomness)} bytes does not fit {len(params.randomness_slots)} slots")
    vec = [0] * n
    for pos, dgt in zip(params.message_slots, _digits(mr, q, len(params.message_slots))):
        vec[pos] = dgt
    for pos, dgt in zip(params.randomness_slots, _digits(rr, q, len(params.randomness_slots))):
        vec[pos] = dgt
    m = params.m
    curve = RationalCurve.from_ints(params.field, [vec[i * (m + 1) : (i + 1) * (m + 1)] for i in range(4)], m)
    report = curve_validate(curve)
    if not report.valid:
        raise InvalidCurve(f"encoded curve is invalid: {report.failures()}", report)
    if require_smooth and not report.unramified_on_sample:
        raise InvalidCurve("encoded curve is singular (ramified parametrization)", report)
    return curve


def decode_curve(curve: RationalCurve, params: SchemeParams) -> tuple[bytes, bytes]:
    """Inverse of ``encode_message`` on its image."""
    vec = curve.coefficient_vector()
    q = params.field.q
    msg = unrank_bytes(_undigits([vec[i] for i in params.message_slots], q))
    rnd = unrank_bytes(_undigits([vec[i] for i in params.randomness_slots], q))
    return msg, rnd


def slot_bytes_for(digits, q: int) -> bytes:
    """Byte string whose encoding fills a slot group with ``digits`` (big-endian)."""
    return unrank_bytes(_undigits(digits, q))


# -- geometry ----------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def _embedding_into(base: Field, target: Field) -> Embedding:
    if base == target:
        return field_extend(base, 1)[1]
    if target.p != base.p or target.k % base.k:
        raise FieldMismatch(f"{target} is not an extension of {base}")
    ext, emb = field_extend(base, target.k // base.k)
    if ext != target:
        raise FieldMismatch(f"{target} does not use the canonical modulus")
    return emb


def embedding_into(base: Field, target: Field) -> Embedding:
    return _embedding_into(base, target)


def _embedded(curve: RationalCurve, emb: Embedding) -> list[list[int]]:
    return [[emb.map_int(c) for c in g.ints] for g in curve.f]


def _horner(F: Field, coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = F.add(F.mul(acc, x), c)
    return acc


def _normalise(F: Field, vec):
    for x in vec:
        if x:
            inv = F.inv(x)
            return tuple(F.mul(inv, y) for y in vec)
    return None


def _points(curve: RationalCurve, F: Field, emb: Embedding):
    """(parameter, normalised point) for every t in F plus t = infinity (None)."""
    polys = _embedded(curve, emb)
    for t in range(F.q):
        yield t, _normalise(F, [_horner(F, g, t) for g in polys])
    lead = [emb.map_int(g.coeff(curve.m)) for g in curve.f]
    yield None, _normalise(F, lead)


def curve_point(curve: RationalCurve, t0) -> tuple[FieldElement, ...]:
    """(f0(t0):...:f3(t0)) normalised so the first nonzero coordinate is 1."""
    if not isinstance(t0, FieldElement):
        t0 = curve.field(t0)
    F = t0.field
    emb = embedding_into(curve.field, F)
    vec = [g.eval(t0.value, emb) for g in curve.f]
    pt = _normalise(F, vec)
    if pt is None:
        raise DegenerateParameter(f"all coordinates vanish at t = {t0!r}")
    return tuple(FieldElement(F, v) for v in pt)


def _fiber_degree(F: Field, polys, point) -> int:
    """Degree of gcd of the 2x2 minors f_i(t) P_j - f_j(t) P_i: the number of
    finite parameters (with multiplicity) mapping to ``point``."""
    g = None
    for i in range(4):
        for j in range(i + 1, 4):
            minor = UniPoly(F, polys[i]).scale(point[j]) - UniPoly(F, polys[j]).scale(point[i])
            if minor.is_zero():
                continue
            g = minor if g is None else g.gcd(minor)
            if g.degree == 0:
                return 0
    if g is None:
        return -1  # every minor vanishes: the curve is a point
    return int(g.degree)


def on_curve(curve: RationalCurve, point, F: Field | None = None) -> bool:
    """Exact membership of a projective point (ints of F) in the image of the curve."""
    F = F or curve.field
    emb = embedding_into(curve.field, F)
    lead = _normalise(F, [emb.map_int(g.coeff(curve.m)) for g in curve.f])
    pt = _normalise(F, list(point))
    if lead is not None and lead == pt:
        return True
    return _fiber_degree(F, _embedded(curve, emb), pt) != 0


@dataclass
class CurveReport:
    exact_degree: bool
    coprime: bool
    nondegenerate: bool
    birational: bool | None = None
    injective_on_sample: bool | None = None
    unramified_on_sample: bool | None = None
    sample_field: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return bool(
            self.exact_degree
            and self.coprime
            and self.nondegenerate
            and self.birational
            and self.injective_on_sample
        )

    @property
    def smooth(self) -> bool:
        return self.valid and bool(self.unramified_on_sample)

    def failures(self) -> list[str]:
        names = ["exact_degree", "coprime", "nondegenerate", "birational", "injective_on_sample"]
        return [n for n in names if not getattr(self, n)]


def curve_validate(curve: RationalCurve) -> CurveReport:
    """Degree, gcd, non-degeneracy, birationality and sampled smoothness checks."""
    Fq = curve.field
    m = curve.m
    nonzero = [g for g in curve.f if not g.is_zero()]
    exact = max((g.degree for g in nonzero), default=-1) == m
    coprime = False
    if nonzero:
        g = nonzero[0].monic()
        for h in nonzero[1:]:
            g = g.gcd(h)
        coprime = g.degree == 0
    nondeg = rank(Fq, curve.coefficient_lists()) >= 2
    report = CurveReport(exact, coprime, nondeg)
    if not (exact and coprime and nondeg):
        return report

    F, emb = extension_for(Fq, 4 * m * m + 1)
    report.sample_field = F.label
    polys = _embedded(curve, emb)
    lead = _normalise(F, [emb.map_int(g.coeff(m)) for g in curve.f])

    # birational iff some parameter has a fiber of size exactly one
    report.birational = False
    for s in range(F.q):
        pt = _normalise(F, [_horner(F, g, s) for g in polys])
        if _fiber_degree(F, polys, pt) == 1 and pt != lead:
            report.birational = True
            break

    seen: dict = {}
    injective = True
    for t, pt in _points(curve, F, emb):
        if pt in seen:
            injective = False
            report.notes.append(f"parameters {seen[pt]} and {t} map to the same point")
            break
        seen[pt] = t
    report.injective_on_sample = injective

    dpolys = _embedded(curve.derivative(), emb)
    unramified = True
    for t in range(F.q):
        v = [_horner(F, g, t) for g in polys]
        dv = [_horner(F, g, t) for g in dpolys]
        if _proportional(F, v, dv):
            unramified = False
            report.notes.append(f"ramified at t={t}")
            break
    if unramified:
        # at infinity use s = 1/t: reversed coefficient lists
        rev = [[emb.map_int(g.coeff(m - j)) for j in range(m + 1)] for g in curve.f]
        v = [r[0] for r in rev]
        dv = [r[1] if m >= 1 else 0 for r in rev]
        if _proportional(F, v, dv):
            unramified = False
            report.notes.append("ramified at t=infinity")
    report.unramified_on_sample = unramified
    return report


def _proportional(F: Field, v, w) -> bool:
    """True if w is a multiple of v (including w = 0)."""
    for i in range(4):
        for j in range(i + 1, 4):
            if F.sub(F.mul(v[i], w[j]), F.mul(v[j], w[i])):
                return False
    return True


def curves_equal_as_sets(a: RationalCurve, b: RationalCurve) -> bool:
    """Whether two valid curves have the same image in P^3.

    Samples more than deg(a)*deg(b) distinct points of each curve over an
    extension and checks exact membership in the other; two distinct
    irreducible curves share at most deg(a)*deg(b) points.
    """
    if a.field != b.field:
        raise FieldMismatch("curves over different fields")
    ma = max(g.degree for g in a.f if not g.is_zero())
    mb = max(g.degree for g in b.f if not g.is_zero())
    need = ma * mb + 1
    F, _ = extension_for(a.field, 2 * ma * mb + 2)
    return _contained(a, b, F, need) and _contained(b, a, F, need)


def _contained(a: RationalCurve, b: RationalCurve, F: Field, need: int) -> bool:
    emb = embedding_into(a.field, F)
    sampled = set()
    for _, pt in _points(a, F, emb):
        if pt is None or pt in sampled:
            continue
        sampled.add(pt)
        if not on_curve(b, pt, F):
            return False
        if len(sampled) >= need:
            break
    return True
