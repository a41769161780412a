"""Intersection numbers for the uniqueness criterion and Weil-polynomial bounds.

Polynomials in this module are integer or Fraction coefficient lists in
ascending degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from surfcommit import kernels
from surfcommit.algebra.field import field_extend
from surfcommit.errors import (
    CapacityExceeded,
    InconsistentCounts,
    InsufficientData,
    ParseError,
    TheoremHypothesisViolated,
    ValidationError,
)

WEIL_TOL = 1e-6

# -- exact polynomial helpers ---------------------------------------------------


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def pscale(a, c):
    return _trim([c * x for x in a])


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pdivmod(a, b):
    """Division over the rationals."""
    a = [Fraction(x) for x in _trim(a)]
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] -= c * y
        a = _trim(a)
    return _trim(q), a


def pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    lead = Fraction(a[-1])
    return [Fraction(x) / lead for x in a]


def pderiv(a):
    return _trim([i * a[i] for i in range(1, len(a))])


def _det3(M):
    """Cofactor expansion along the first row; entries may be polynomials."""

    def minor(i, j):
        (a, b), (c, d) = [[M[r][s] for s in range(3) if s != j] for r in range(3) if r != i]
        return padd(pmul(a, d), pscale(pmul(b, c), -1))

    out = []
    for j in range(3):
        term = pmul(M[0][j], minor(0, j))
        out = padd(out, term if j % 2 == 0 else pscale(term, -1))
    return out


# -- intersection theory ---------------------------------------------------------


@dataclass(frozen=True)
class IntersectionData:
    d: int
    m: int
    delta: int | None = None

    @property
    def H2(self) -> int:
        return self.d

    @property
    def HD(self) -> int:
        return self.m

    @property
    def Dsq(self) -> int:
        """Self-intersection of a smooth rational curve of degree m, by adjunction."""
        return -(2 + (self.d - 4) * self.m)

    def gram(self):
        A = [self.Dsq]
        dl = [0, 1] if self.delta is None else [self.delta]
        c = lambda v: _trim([v])
        return [[c(self.d), c(self.m), c(self.m)], [c(self.m), A, dl], [c(self.m), dl, A]]

    @property
    def det(self):
        """Exact integer, or ascending coefficient list in delta when symbolic."""
        poly = _det3(self.gram())
        if self.delta is None:
            return poly
        return poly[0] if poly else 0


def symbolic_det(d: int, m: int) -> list[int]:
    return IntersectionData(d, m).det


def intersection_det(d: int, m: int, delta: int | None = None):
    if d < 1 or m < 1:
        raise ValidationError("need d >= 1 and m >= 1")
    return IntersectionData(d, m, delta).det


def factored_det(d: int, m: int, delta) -> Fraction:
    """(A - delta)(d(A + delta) - 2m^2) with A = -(2 + (d-4)m)."""
    A = -(2 + (d - 4) * m)
    return (A - delta) * (d * (A + delta) - 2 * m * m)


def det_roots(d: int, m: int) -> tuple[Fraction, Fraction]:
    """The two values of delta where the determinant vanishes, certified by division."""
    if d < 1 or m < 1:
        raise ValidationError("need d >= 1 and m >= 1")
    A = -(2 + (d - 4) * m)
    r1 = Fraction(A)
    r2 = Fraction(2 * m * m, d) - A
    poly = symbolic_det(d, m)
    quot, rem = pdivmod(poly, pmul([-r1, 1], [-r2, 1]))
    if rem or len(quot) != 1:
        raise AssertionError(f"determinant is not a multiple of (delta-{r1})(delta-{r2})")
    return r1, r2


@dataclass(frozen=True)
class CriterionResult:
    verdict: str  # holds_by_inequality | holds_by_nonintegrality | fails
    justification: str
    roots: tuple[Fraction, Fraction]
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.verdict != "fails"


def uniqueness_criterion(d: int, m: int) -> CriterionResult:
    """Whether two smooth rational degree-m curves are ruled out on a Picard-two surface."""
    if d <= 3:
        raise TheoremHypothesisViolated(f"need d > 3, got d={d}")
    if m < 1:
        raise ValidationError("need m >= 1")
    bound = Fraction(2 * d * (d - 4), d - 2)
    roots = det_roots(d, m)
    # the stated inequality is meant to push the second root past the Bezout
    # bound m^2; that implication fails for some (d, m), so check it directly
    if m < bound and roots[1] > m * m:
        return CriterionResult(
            "holds_by_inequality", f"m={m} < 2d(d-4)/(d-2) = {bound} and second root {roots[1]} > m^2 = {m * m}", roots, bound
        )
    admissible = [r for r in roots if r.denominator == 1 and 0 <= r <= m * m]
    note = f"m={m} < {bound} but second root {roots[1]} <= m^2; " if m < bound else ""
    if not admissible:
        return CriterionResult(
            "holds_by_nonintegrality",
            f"{note}roots {roots[0]}, {roots[1]}: none is an integer in [0, m^2] = [0, {m * m}]",
            roots,
            bound,
        )
    return CriterionResult(
        "fails", f"{note}delta = {admissible[0]} is an admissible intersection number in [0, {m * m}]", roots, bound
    )


def betti_b2(d: int) -> int:
    if d < 1:
        raise ValidationError("need d >= 1")
    return d**3 - 4 * d**2 + 6 * d - 2


# -- point counting -------------------------------------------------------------


def count_points(S, i: int, workers: int = 1, cap: int = 2**27) -> int:
    """#{x in P^3(F_{q^i}) : F(x) = 0} by exhaustive enumeration."""
    q = S.field.q
    if i < 1:
        raise ValidationError("extension index must be >= 1")
    if q ** (3 * i) > cap:
        raise CapacityExceeded(f"enumerating P^3(F_{q}^{i}) exceeds the cap {cap}")
    Fi, emb = field_extend(S.field, i)
    return kernels.count_common_zeros(Fi, [S.F.embed(emb)], workers)


# -- Weil polynomials ------------------------------------------------------------


@dataclass
class Candidate:
    sign: int
    coeffs: list[int]  # ascending, monic of degree b2
    q_multiplicity: int

    def __str__(self):
        return f"sign={self.sign:+d} mult={self.q_multiplicity} coeffs={','.join(map(str, self.coeffs))}"


@dataclass
class WeilData:
    q: int
    d: int
    counts: list[int] = field(default_factory=list)
    b2: int | None = None
    traces: list[int] = field(default_factory=list)
    candidates: list[Candidate] = field(default_factory=list)
    rejected: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.b2 is None:
            self.b2 = betti_b2(self.d)
        if self.counts and not self.traces:
            self.traces = traces_from_counts(self.q, self.counts)

    @property
    def picard_upper(self) -> int | None:
        """Largest q-multiplicity over surviving candidates (a bound valid for all)."""
        if not self.candidates:
            return None
        return max(c.q_multiplicity for c in self.candidates)


def traces_from_counts(q: int, counts) -> list[int]:
    return [n - 1 - q ** (2 * i) for i, n in enumerate(counts, start=1)]


def power_sums(coeffs, r: int) -> list[int]:
    """p_1..p_r of the roots of a monic integer polynomial (ascending coefficients)."""
    b = len(coeffs) - 1
    e = [(-1) ** k * coeffs[b - k] for k in range(b + 1)]
    p = []
    for k in range(1, r + 1):
        s = (-1) ** (k - 1) * k * (e[k] if k <= b else 0)
        for i in range(1, k):
            s += (-1) ** (i - 1) * (e[i] if i <= b else 0) * p[k - i - 1]
        p.append(s)
    return p


def traces_from_polynomial(coeffs, r: int) -> list[int]:
    return power_sums(coeffs, r)


def _elementary(traces, r: int) -> list[int]:
    """e_0..e_r from power sums by Newton's identities; must stay integral."""
    e = [1]
    for k in range(1, r + 1):
        s = 0
        for i in range(1, k + 1):
            s += (-1) ** (i - 1) * e[k - i] * traces[i - 1]
        if s % k:
            raise InconsistentCounts(f"e_{k} = {Fraction(s, k)} is not an integer")
        e.append(s // k)
    return e


def q_multiplicity(coeffs, q: int) -> int:
    poly = [Fraction(c) for c in coeffs]
    mult = 0
    while len(poly) > 1:
        quot, rem = pdivmod(poly, [-q, 1])
        if rem:
            break
        poly = quot
        mult += 1
    return mult


def satisfies_weil_bound(coeffs, q: int, tol: float = WEIL_TOL) -> bool:
    """All complex roots have absolute value q (root finding on the squarefree part)."""
    if len(coeffs) <= 1:
        return True
    g = pgcd(coeffs, pderiv(coeffs))
    core, _ = pdivmod(coeffs, g) if len(g) > 1 else ([Fraction(c) for c in coeffs], [])
    if len(core) <= 1:
        return True
    roots = np.roots([float(c) for c in reversed(core)])
    return bool(np.all(np.abs(np.abs(roots) - q) <= tol * q))


def weil_reconstruct(data: WeilData, sign: int) -> list[Candidate]:
    """Monic integer polynomials of degree b2 with the given traces and functional-equation sign.

    The eigenvalue multiset is closed under a -> q^2/a, so e_{b-k} = sign q^{b-2k} e_k;
    the first floor(b2/2) power sums therefore determine the polynomial.  Extra
    traces are used as consistency checks.
    """
    if sign not in (1, -1):
        raise ValidationError("sign must be +1 or -1")
    b, q = data.b2, data.q
    need = b // 2
    r = len(data.traces)
    if r < need:
        raise InsufficientData(
            f"{r} traces given, {need} needed for b2={b}",
            {"traces": list(data.traces), "needed": need},
        )
    e = _elementary(data.traces, min(r, b))
    full = e[: need + 1] + [0] * (b - need)
    for k in range(need + 1, b + 1):
        # e_k = sign q^{2k-b} e_{b-k}
        full[k] = sign * q ** (2 * k - b) * full[b - k]
    if b % 2 == 0 and sign == -1 and full[b // 2] != 0:
        data.rejected.append(f"sign=-1: middle coefficient e_{b // 2} must vanish")
        return []
    for k in range(need + 1, min(r, b) + 1):
        if e[k] != full[k]:
            data.rejected.append(f"sign={sign:+d}: trace {k} contradicts the functional equation")
            return []
    if r > b:
        extra = power_sums([(-1) ** (b - i) * full[b - i] for i in range(b + 1)], r)
        if extra != list(data.traces):
            data.rejected.append(f"sign={sign:+d}: traces beyond b2 disagree")
            return []
    coeffs = [(-1) ** (b - i) * full[b - i] for i in range(b + 1)]
    if not satisfies_weil_bound(coeffs, q):
        data.rejected.append(f"sign={sign:+d}: roots violate |alpha| = q")
        return []
    cand = Candidate(sign, coeffs, q_multiplicity(coeffs, q))
    data.candidates.append(cand)
    return [cand]


def weil_reconstruct_both(data: WeilData) -> list[Candidate]:
    out = []
    for s in (1, -1):
        out.extend(weil_reconstruct(data, s))
    return out


@dataclass(frozen=True)
class GateResult:
    verdict: str  # verified_two | not_two | inconclusive
    reason: str


def picard_gate(candidates, d: int | None = None) -> GateResult:
    cands = list(candidates)
    if d is not None and d % 2:
        return GateResult("inconclusive", "d is odd: the functional-equation parity forbids multiplicity two")
    if not cands:
        return GateResult("inconclusive", "no candidate polynomial survived")
    mults = sorted({c.q_multiplicity for c in cands})
    if mults == [2]:
        return GateResult("verified_two", "every candidate has q-multiplicity 2")
    if 2 not in mults and min(mults) > 2:
        return GateResult("not_two", f"every candidate has q-multiplicity above 2: {mults}")
    return GateResult("inconclusive", f"candidate q-multiplicities {mults}")


def parse_counts(text: str) -> list[int]:
    """Counts file: lines ``i N_i`` with i = 1, 2, ... in order."""
    counts = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2 or not all(x.lstrip("-").isdigit() for x in parts):
            raise ParseError(f"expected 'i N_i', got {line!r}", lineno, 1)
        i, n = int(parts[0]), int(parts[1])
        if i != len(counts) + 1:
            raise ParseError(f"expected index {len(counts) + 1}, got {i}", lineno, 1)
        if n < 0:
            raise ValidationError(f"negative point count at line {lineno}")
        counts.append(n)
    return counts


def format_counts(counts) -> str:
    return "".join(f"{i} {n}\n" for i, n in enumerate(counts, start=1))


__all__ = [
    "Candidate",
    "CriterionResult",
    "GateResult",
    "IntersectionData",
    "WeilData",
    "betti_b2",
    "count_points",
    "det_roots",
    "factored_det",
    "intersection_det",
    "parse_counts",
    "picard_gate",
    "q_multiplicity",
    "satisfies_weil_bound",
    "traces_from_counts",
    "traces_from_polynomial",
    "uniqueness_criterion",
    "weil_reconstruct",
    "weil_reconstruct_both",
]
