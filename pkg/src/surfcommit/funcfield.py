"""Injectivity experiments for x^m + t y^m over F_p(t) and x^7 + 3y^7 over Q,
and a checker for the degree bound on S-unit equations over F_p(t).

Polynomials over F_p are ascending int coefficient lists (see ``fppoly``).
"""

from __future__ import annotations

import random
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np

from surfcommit.algebra import fppoly
from surfcommit.algebra.field import is_prime
from surfcommit.algebra.upoly import UniPoly
from surfcommit.errors import (
    CapacityExceeded,
    DegenerateValue,
    InvalidInstance,
    ParseError,
    ValidationError,
)

SCAN_CAP = 2**26


def _ints(f) -> list[int]:
    if isinstance(f, UniPoly):
        return list(f.ints)
    return fppoly.trim([int(c) for c in f])


def poly_from_index(n: int, p: int, length: int) -> list[int]:
    out = []
    for _ in range(length):
        n, r = divmod(n, p)
        out.append(r)
    return fppoly.trim(out)


# -- x^m + t y^m over F_p[t] -------------------------------------------------------


@dataclass
class InjectivityScan:
    p: int
    m_exp: int
    deg_bound: int
    collisions: list = field(default_factory=list)
    constant_collisions: list = field(default_factory=list)
    pairs_scanned: int = 0


def xy_value(x, y, p: int, m: int) -> list[int]:
    """x^m + t y^m."""
    return fppoly.add(fppoly.power(x, m, p), [0] + fppoly.power(y, m, p) if fppoly.trim(y) else [], p)


def _packed_keys(vals: np.ndarray, bits: int) -> np.ndarray:
    per = max(1, 62 // bits)
    L = vals.shape[-1]
    words = []
    for lo in range(0, L, per):
        w = np.zeros(vals.shape[:-1], dtype=np.int64)
        for j in range(lo, min(L, lo + per)):
            w = (w << bits) | vals[..., j]
        words.append(w)
    return np.stack(words, axis=-1)


def injectivity_scan(p: int, m_exp: int, deg_bound: int, workers: int = 1, cap: int = SCAN_CAP) -> InjectivityScan:
    """All pairs of polynomials of degree <= deg_bound; collisions of x^m + t y^m."""
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime")
    if m_exp < 1 or deg_bound < 0:
        raise ValidationError("need m >= 1 and deg_bound >= 0")
    N = p ** (deg_bound + 1)
    if N * N > cap:
        raise CapacityExceeded(f"{N * N} pairs exceed the scan cap {cap}")
    L = m_exp * deg_bound + 2
    polys = [poly_from_index(n, p, deg_bound + 1) for n in range(N)]
    X = np.zeros((N, L), dtype=np.int64)
    Y = np.zeros((N, L), dtype=np.int64)
    for n, f in enumerate(polys):
        xm = fppoly.power(f, m_exp, p) if f else []
        X[n, : len(xm)] = xm
        if f:
            Y[n, 1 : 1 + len(xm)] = xm
    bits = max(1, (p - 1).bit_length())
    step = max(1, (2**22) // max(1, N * L))
    ranges = [(lo, min(N, lo + step)) for lo in range(0, N, step)]

    tasks = [(X, Y, p, bits, lo, hi) for lo, hi in ranges]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_keys_task, tasks))
    else:
        parts = [_keys_task(t) for t in tasks]
    keys = np.concatenate(parts, axis=0)
    _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    inverse = inverse.reshape(-1)
    scan = InjectivityScan(p, m_exp, deg_bound, pairs_scanned=N * N)
    dup = np.flatnonzero(counts[inverse] > 1)
    groups: dict = {}
    for idx in dup:
        groups.setdefault(int(inverse[idx]), []).append(int(idx))
    for members in groups.values():
        members.sort()
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                (x1, y1), (x2, y2) = divmod(members[a], N), divmod(members[b], N)
                P1, P2 = (polys[x1], polys[y1]), (polys[x2], polys[y2])
                # exact re-evaluation, never trusting the packed key alone
                if xy_value(*P1, p, m_exp) != xy_value(*P2, p, m_exp):
                    raise AssertionError("packed keys collided without equal values")
                pair = (tuple(map(tuple, P1)), tuple(map(tuple, P2)))
                if all(len(f) <= 1 for f in P1 + P2):
                    scan.constant_collisions.append(pair)
                else:
                    scan.collisions.append(pair)
    return scan


def _keys_task(args):
    X, Y, p, bits, lo, hi = args
    vals = (X[lo:hi, None, :] + Y[None, :, :]) % p
    k = _packed_keys(vals, bits)
    return k.reshape(-1, k.shape[-1])


# -- the Frobenius second solution ----------------------------------------------------


@dataclass
class FrobeniusResult:
    p: int
    q: int
    exponent: int
    k: list[int]
    x_prime: tuple[list[int], list[int]]  # (numerator, denominator)
    y_prime: tuple[list[int], list[int]]
    identity_sparse: bool  # x^{eq} + t^q y^{eq} = k^q using sparse Frobenius powers
    identity_dense: bool | None  # same identity with k^q by repeated squaring
    distinct: bool


def sparse_to_dense(s: dict) -> list[int]:
    if not s:
        return []
    out = [0] * (max(s) + 1)
    for i, c in s.items():
        out[i] = c
    return out


def frobenius_second_solution(x, y, p: int, exponent: int = 13, q: int | None = None, dense: bool = True) -> FrobeniusResult:
    """Second preimage of k = x^e + t y^e built from the Frobenius endomorphism.

    With q = p^12 (so e | q - 1 for e = 13 and p != 13),
    x' = x^q / k^((q-1)/e) and y' = t^((q-1)/e) y^q / k^((q-1)/e) satisfy
    x'^e + t y'^e = k, which after clearing denominators reads
    x^(eq) + t^q y^(eq) = k^q.
    """
    if not is_prime(p):
        raise ValidationError(f"p={p} is not prime")
    q = q if q is not None else p**12
    if (q - 1) % exponent:
        raise ValidationError(f"{exponent} does not divide q - 1 = {q - 1}")
    x, y = _ints(x), _ints(y)
    xe = fppoly.power(x, exponent, p) if x else []
    ye = fppoly.power(y, exponent, p) if y else []
    k = fppoly.add(xe, [0] + ye if ye else [], p)
    if not k:
        raise DegenerateValue("x^e + t y^e vanishes")
    w = (q - 1) // exponent
    den = fppoly.power(k, w, p)
    xq = sparse_to_dense(fppoly.frobenius_power(x, q))
    yq = sparse_to_dense(fppoly.frobenius_power(y, q))
    y_num = [0] * w + yq if yq else []

    lhs = fppoly.add(
        sparse_to_dense(fppoly.frobenius_power(xe, q)),
        sparse_to_dense({i + q: c for i, c in fppoly.frobenius_power(ye, q).items()}),
        p,
    )
    kq_sparse = sparse_to_dense(fppoly.frobenius_power(k, q))
    identity_sparse = lhs == kq_sparse
    identity_dense = None
    if dense:
        identity_dense = lhs == fppoly.power(k, q, p)
    distinct = not (xq == fppoly.mul(x, den, p) and y_num == fppoly.mul(y, den, p))
    return FrobeniusResult(p, q, exponent, k, (xq, den), (y_num, den), identity_sparse, identity_dense, distinct)


# -- x^7 + 3y^7 over Q ----------------------------------------------------------------


@dataclass
class ZagierScan:
    height: int
    rationals: int
    pairs_scanned: int
    collisions: list = field(default_factory=list)
    zero_preimages: list = field(default_factory=list)


def rationals_of_height(H: int) -> list[Fraction]:
    """Distinct a/b with |a| <= H and 1 <= b <= H, ascending."""
    vals = {Fraction(a, b) for b in range(1, H + 1) for a in range(-H, H + 1)}
    return sorted(vals)


def zagier_value(x: Fraction, y: Fraction) -> Fraction:
    return x**7 + 3 * y**7


def zagier_collision_search(height_bound: int, cap: int = 2**24) -> ZagierScan:
    """Collisions of x^7 + 3y^7 over rationals of height <= H (exact arithmetic)."""
    H = height_bound
    if H < 0:
        raise ValidationError("height bound must be non-negative")
    if (2 * H + 1) ** 4 > cap:
        raise CapacityExceeded(f"(2H+1)^4 = {(2 * H + 1) ** 4} exceeds the cap {cap}")
    rs = rationals_of_height(H)
    pw = [(r.numerator**7, r.denominator**7) for r in rs]
    seen: dict = {}
    scan = ZagierScan(H, len(rs), len(rs) ** 2)
    for i, (ax, bx) in enumerate(pw):
        for j, (ay, by) in enumerate(pw):
            num = ax * by + 3 * ay * bx
            den = bx * by
            g = gcd(num, den)
            key = (num // g, den // g)
            if key in seen:
                i0, j0 = seen[key]
                a, b = (rs[i0], rs[j0]), (rs[i], rs[j])
                if zagier_value(*a) != zagier_value(*b):
                    raise AssertionError("reduced keys collided without equal values")
                scan.collisions.append((a, b))
            else:
                seen[key] = (i, j)
            if num == 0:
                scan.zero_preimages.append((rs[i], rs[j]))
    return scan


# -- S-unit degree bound -----------------------------------------------------------


def _reduce(num, den, p):
    num, den = fppoly.trim(list(num)), fppoly.trim(list(den))
    if not den:
        raise InvalidInstance("zero denominator")
    g = fppoly.gcd(num, den, p) if num else fppoly.monic(den, p)
    num = fppoly.divmod_(num, g, p)[0] if num else []
    den = fppoly.divmod_(den, g, p)[0]
    inv = pow(den[-1], -1, p)
    return fppoly.scale(num, inv, p), fppoly.scale(den, inv, p)


@dataclass
class SUnitInstance:
    p: int
    units: list  # (numerator, denominator) int lists, reduced, monic denominators
    g: int = 0

    def __post_init__(self):
        if not is_prime(self.p):
            raise InvalidInstance(f"p={self.p} is not prime")
        self.units = [_reduce(n, d, self.p) for n, d in self.units]
        if any(not n for n, _ in self.units):
            raise InvalidInstance("a unit is zero")

    @property
    def t_count(self) -> int:
        return len(self.units)

    def degrees(self) -> list[int]:
        return [max(fppoly.deg(n), fppoly.deg(d)) for n, d in self.units]

    def S_size(self) -> int:
        """Places over the algebraic closure supporting zeros and poles, plus infinity."""
        prod = [1]
        for n, d in self.units:
            prod = fppoly.mul(prod, fppoly.mul(n, d, self.p), self.p)
        return fppoly.deg(fppoly.radical(prod, self.p)) + 1

    def common_denominator(self) -> list[int]:
        D = [1]
        for _, d in self.units:
            D = fppoly.divmod_(fppoly.mul(D, d, self.p), fppoly.gcd(D, d, self.p), self.p)[0]
        return D

    def cleared(self) -> list[list[int]]:
        """u_i times the common denominator, as polynomials."""
        D = self.common_denominator()
        return [fppoly.mul(n, fppoly.divmod_(D, d, self.p)[0], self.p) for n, d in self.units]

    def sums_to_one(self) -> bool:
        p = self.p
        total = []
        for g in self.cleared():
            total = fppoly.add(total, g, p)
        return total == self.common_denominator()

    def independent(self) -> bool:
        """Linear independence over F_p (equivalently over its algebraic closure)."""
        from surfcommit.algebra.field import GF
        from surfcommit.algebra.linalg import rank

        polys = self.cleared()
        width = max(len(g) for g in polys)
        M = [g + [0] * (width - len(g)) for g in polys]
        return rank(GF(self.p), M) == len(polys)

    def morphism_degree(self) -> int:
        """Degree of (u_1 : ... : u_t) as a reduced polynomial tuple."""
        polys = self.cleared()
        g = polys[0]
        for h in polys[1:]:
            g = fppoly.gcd(g, h, self.p) if h else g
        return max(fppoly.deg(fppoly.divmod_(h, g, self.p)[0]) for h in polys if h)

    def bound(self) -> Fraction:
        t = self.t_count
        return Fraction(t * (t - 1), 2) * (2 * self.g - 2 + self.S_size())


@dataclass
class SUnitReport:
    p: int
    t_count: int
    degrees: list[int]
    S_size: int
    bound: Fraction
    independent: bool
    morphism_degree: int
    hypotheses_hold: bool
    bound_holds: bool

    @property
    def contradiction(self) -> bool:
        return self.hypotheses_hold and not self.bound_holds

    @property
    def verdict(self) -> str:
        if self.contradiction:
            return "THEOREM CONTRADICTION"
        if not self.hypotheses_hold:
            return "not_asserted"
        return "holds"


def sunit_bound_check(instance: SUnitInstance) -> SUnitReport:
    if not instance.sums_to_one():
        raise InvalidInstance("units do not sum to 1")
    degs = instance.degrees()
    indep = instance.independent()
    mdeg = instance.morphism_degree()
    bound = instance.bound()
    return SUnitReport(
        instance.p,
        instance.t_count,
        degs,
        instance.S_size(),
        bound,
        indep,
        mdeg,
        indep and mdeg < instance.p,
        max(degs) <= bound,
    )


def random_sunit_instance(p: int, t: int, rng: random.Random, max_factors: int = 3, max_exp: int = 2) -> SUnitInstance:
    """t-1 random units supported on linear places, completed by u_t = 1 - sum."""
    units = []
    for _ in range(t - 1):
        num, den = [rng.randrange(1, p)], [1]
        for _ in range(rng.randint(1, max_factors)):
            a = rng.randrange(p)
            e = rng.choice([x for x in range(-max_exp, max_exp + 1) if x])
            lin = [(-a) % p, 1]
            for _ in range(abs(e)):
                if e > 0:
                    num = fppoly.mul(num, lin, p)
                else:
                    den = fppoly.mul(den, lin, p)
        units.append((num, den))
    inst = SUnitInstance(p, units)
    D = inst.common_denominator()
    rest = D
    for g in inst.cleared():
        rest = fppoly.sub(rest, g, p)
    if not rest:
        raise InvalidInstance("the sampled units already sum to 1")
    return SUnitInstance(p, inst.units + [(rest, D)])


def parse_instance(text: str) -> SUnitInstance:
    """Instance file: ``p=<prime>``, optional ``g=<genus>``, then ``u=<num>/<den>`` lines.

    Polynomials are comma-separated ascending coefficients.
    """
    p = g = None
    units = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if mt := re.fullmatch(r"p=(\d+)", line):
            p = int(mt.group(1))
        elif mt := re.fullmatch(r"g=(\d+)", line):
            g = int(mt.group(1))
        elif mt := re.fullmatch(r"u=(-?\d+(?:,-?\d+)*)/(-?\d+(?:,-?\d+)*)", line):
            if p is None:
                raise ParseError("p must be given before units", lineno, 1)
            num = [int(c) % p for c in mt.group(1).split(",")]
            den = [int(c) % p for c in mt.group(2).split(",")]
            units.append((num, den))
        else:
            raise ParseError(f"unrecognized line {line!r}", lineno, 1)
    if p is None or not units:
        raise ParseError("instance needs p and at least one unit", 1)
    return SUnitInstance(p, units, g or 0)


def format_instance(inst: SUnitInstance) -> str:
    lines = [f"p={inst.p}", f"g={inst.g}"]
    for n, d in inst.units:
        lines.append("u=" + ",".join(map(str, n or [0])) + "/" + ",".join(map(str, d)))
    return "\n".join(lines) + "\n"
