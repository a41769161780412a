"""Containment systems, surface sampling and smoothness certification."""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from math import comb

import numpy as np

from surfcommit import kernels
from surfcommit.algebra.field import GF, Field, field_extend
from surfcommit.algebra.linalg import nullspace as _nullspace
from surfcommit.algebra.linalg import rank as _rank
from surfcommit.algebra.mpoly import HomogPoly, monomial_basis, monomial_substitutions
from surfcommit.curve import RationalCurve, curve_validate
from surfcommit.errors import (
    CapacityExceeded,
    GroebnerBudgetExceeded,
    InvalidCurve,
    NoSurfaceExists,
    ParseError,
    ValidationError,
)
from surfcommit.groebner import GroebnerBasis, groebner, macaulay_basis

SCAN_CAP = 2**22


@dataclass(frozen=True)
class Surface:
    F: HomogPoly

    def __post_init__(self):
        if self.F.is_zero():
            raise ValidationError("the zero polynomial does not define a surface")

    @classmethod
    def from_vector(cls, field: Field, d: int, vector) -> "Surface":
        return cls(HomogPoly.from_vector(field, d, [int(v) for v in vector]))

    @property
    def d(self) -> int:
        return self.F.degree

    @property
    def field(self) -> Field:
        return self.F.field

    def coefficients(self) -> list[int]:
        return self.F.to_vector()

    def serialize(self) -> str:
        F = self.field
        coeffs = " ".join(F.element(c).serialize() for c in self.coefficients())
        return f"q={F.label} {self.d}\n{coeffs}\n"

    @classmethod
    def deserialize(cls, text: str) -> "Surface":
        lines = text.split("\n")
        if len(lines) < 2:
            raise ParseError("surface needs a header and a coefficient line", 1)
        field, (d,) = parse_header(lines[0], 1, 1)
        coeffs = parse_elements(field, lines[1], 2, comb(d + 3, 3))
        rest = lines[2:]
        if rest != [""] and rest != []:
            raise ParseError("trailing content after the coefficient line", 3)
        s = cls.from_vector(field, d, coeffs)
        if s.serialize() != text:
            raise ParseError("surface text is not in canonical form", 1)
        return s


_HEADER = re.compile(r"q=(\d+)\^(\d+)((?: -?\d+)*)")


def parse_header(line: str, lineno: int, nints: int) -> tuple[Field, tuple[int, ...]]:
    """Parse ``q=p^k a b ...`` with exactly ``nints`` trailing integers."""
    mt = _HEADER.fullmatch(line)
    if not mt:
        raise ParseError(f"malformed header {line!r}", lineno, 1)
    ints = tuple(int(x) for x in mt.group(3).split())
    if len(ints) != nints:
        raise ParseError(f"expected {nints} integers after q", lineno, mt.start(3) + 1)
    p, k = int(mt.group(1)), int(mt.group(2))
    try:
        field = GF(p, k)
    except Exception as exc:
        raise ValidationError(f"bad field q={p}^{k}: {exc}") from exc
    if any(x < 1 for x in ints):
        raise ValidationError("degrees must be positive")
    return field, ints


def parse_elements(field: Field, line: str, lineno: int, count: int | None = None) -> list[int]:
    """Space-separated field elements, each ``c0,...,c_{k-1}``."""
    toks = line.split(" ") if line else []
    if count is not None and len(toks) != count:
        raise ParseError(f"expected {count} field elements, found {len(toks)}", lineno, len(line) + 1)
    out = []
    col = 1
    for tok in toks:
        parts = tok.split(",")
        if len(parts) != field.k or not all(re.fullmatch(r"0|[1-9]\d*", x) for x in parts):
            raise ParseError(f"malformed field element {tok!r}", lineno, col)
        digits = [int(x) for x in parts]
        if any(x >= field.p for x in digits):
            raise ValidationError(f"residue out of range for {field} at line {lineno}, column {col}")
        out.append(field.from_coeffs(digits).value)
        col += len(tok) + 1
    return out


# -- containment system ----------------------------------------------------------


@dataclass(frozen=True)
class LinearSystem:
    field: Field
    d: int
    m: int
    matrix: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return tuple(self.matrix.shape)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]


def containment_system(curve: RationalCurve, d: int, validate: bool = True) -> LinearSystem:
    """Matrix sending surface coefficient vectors to the coefficients of F(f0,...,f3)."""
    if validate:
        report = curve_validate(curve)
        if not report.valid:
            raise InvalidCurve(f"curve fails validation: {report.failures()}", report)
    basis = monomial_basis(d)
    F = curve.field
    rows = d * curve.m + 1
    M = F.asarray(np.zeros((rows, len(basis)), dtype=np.int64))
    for j, sub in enumerate(monomial_substitutions(curve.f, d)):
        ints = sub.ints
        M[: len(ints), j] = ints
    return LinearSystem(F, d, curve.m, M)


@dataclass(frozen=True)
class SolutionSpace:
    field: Field
    d: int
    vectors: np.ndarray  # one basis vector per row

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def surfaces(self) -> list[Surface]:
        return [Surface.from_vector(self.field, self.d, v) for v in self.vectors]


def nullspace(system: LinearSystem) -> SolutionSpace:
    return SolutionSpace(system.field, system.d, _nullspace(system.field, system.matrix))


def zero_coefficients(system: LinearSystem, positions) -> LinearSystem:
    """Append rows forcing the surface coefficients at ``positions`` to vanish.

    Shrinks the commitment when many positions are zeroed; whether this
    keeps the scheme binding is not established.
    """
    positions = sorted(set(positions))
    if any(not 0 <= i < system.cols for i in positions):
        raise ValidationError(f"coefficient position out of range [0, {system.cols})")
    extra = np.zeros((len(positions), system.cols), dtype=system.matrix.dtype)
    extra[np.arange(len(positions)), positions] = 1
    return LinearSystem(system.field, system.d, system.m, np.concatenate([system.matrix, extra]))


def system_rank(system: LinearSystem) -> int:
    return _rank(system.field, system.matrix)


def field_stream(seed: bytes, q: int, n: int) -> list[int]:
    """n uniform ints in [0, q) by rejection sampling from a SHAKE-256 stream."""
    nbytes = max(1, (q - 1).bit_length() + 7 >> 3)
    mask = (1 << max(1, (q - 1).bit_length())) - 1
    out: list[int] = []
    length = 4 * n * nbytes + 32
    while True:
        stream = hashlib.shake_256(seed).digest(length)
        out.clear()
        for i in range(0, len(stream) - nbytes + 1, nbytes):
            v = int.from_bytes(stream[i : i + nbytes], "big") & mask
            if v < q:
                out.append(v)
                if len(out) == n:
                    return out
        length *= 2


def sample_surface(space: SolutionSpace, seed: bytes) -> Surface:
    """Deterministic nonzero combination of the basis vectors."""
    if space.dim == 0:
        raise NoSurfaceExists("the containment system has only the trivial solution")
    F = space.field
    lam = field_stream(b"surface|" + seed, F.q, space.dim)
    if not any(lam):
        lam[0] = 1
    acc = np.zeros(space.vectors.shape[1], dtype=np.int64)
    acc = F.asarray(acc)
    for c, v in zip(lam, space.vectors):
        if c:
            acc = F.vadd(acc, F.vmul(v, c))
    return Surface.from_vector(F, space.d, acc)


# -- smoothness -----------------------------------------------------------------


def jacobian_forms(S: Surface) -> list[HomogPoly]:
    """F together with its four partials (F kept for the p | d case)."""
    return [S.F] + [g for g in S.F.partials()]


def saturation_bound(S: Surface) -> int:
    """Degree by which a primary Jacobian ideal contains every monomial."""
    d0 = S.d - 1 if S.d % S.field.p else S.d
    return max(0, 4 * (d0 - 1) + 1)


@dataclass(frozen=True)
class SingularPoint:
    ext: int
    field: Field
    point: tuple[int, int, int, int]

    def __str__(self):
        coords = ":".join(self.field.element(c).serialize() for c in self.point)
        return f"({coords}) over F_{self.field.label}"


@dataclass
class SmoothnessCertificate:
    status: str  # smooth | singular | undecided
    method: str
    groebner: GroebnerBasis | None = None
    witness: SingularPoint | None = None
    saturated_degree: int | None = None
    detail: str = ""
    notes: list = field(default_factory=list)

    @property
    def smooth(self) -> bool:
        return self.status == "smooth"

    def digest(self) -> str:
        if self.groebner is None:
            return ""
        return hashlib.sha256(self.groebner.serialize().encode()).hexdigest()


def _witness(S: Surface, scan_ext: int, workers: int, cap: int) -> SingularPoint | None:
    q = S.field.q
    for j in range(1, scan_ext + 1):
        if q ** (3 * j) > cap:
            break
        pts = singular_points_search(S, j, workers=workers, cap=cap, only_ext=j, first=True)
        if pts:
            return pts[0]
    return None


def smoothness_certify(
    S: Surface,
    method: str = "macaulay",
    max_pairs: int = 20000,
    scan_ext: int = 3,
    workers: int = 1,
    cap: int = SCAN_CAP,
) -> SmoothnessCertificate:
    """Decide smoothness through the Jacobian ideal (F, dF/dx0, ..., dF/dx3).

    ``smooth`` carries a reduced grevlex Gröbner basis with a pure power of
    every variable among its leading terms.  ``singular`` is only reported
    with an explicit witness found by scanning P^3 over small extensions.
    """
    forms = [g for g in jacobian_forms(S) if not g.is_zero()]
    notes = []
    if S.d % S.field.p == 0:
        notes.append("p divides d: Euler relation does not recover F from its partials")
    if method == "macaulay":
        res = macaulay_basis(S.field, forms, saturation_bound(S))
        if res.saturated_degree is not None:
            gb = GroebnerBasis(S.field, "grevlex", 4, res.basis)
            return SmoothnessCertificate("smooth", method, gb, saturated_degree=res.saturated_degree, notes=notes)
        detail = "Jacobian ideal misses monomials in the saturation degree: singular over the algebraic closure"
    elif method == "buchberger":
        try:
            gb = groebner(forms, "grevlex", max_pairs=max_pairs)
        except GroebnerBudgetExceeded as exc:
            return SmoothnessCertificate("undecided", method, detail=str(exc), notes=notes)
        if gb.is_zero_dimensional():
            return SmoothnessCertificate("smooth", method, gb, notes=notes)
        detail = "Jacobian ideal is not zero-dimensional on the affine cone: singular over the algebraic closure"
    else:
        raise ValidationError(f"unknown method {method!r}")
    w = _witness(S, scan_ext, workers, cap) if scan_ext > 0 else None
    if w is not None:
        return SmoothnessCertificate("singular", method, witness=w, detail=detail, notes=notes)
    return SmoothnessCertificate("undecided", method, detail=detail + "; no witness found in scanned extensions", notes=notes)


def _defined_over_smaller(F: Field, point, j: int, base_q: int) -> bool:
    for i in range(1, j):
        if j % i == 0 and all(F.pow(x, base_q**i) == x for x in point):
            return True
    return False


def singular_points_search(
    S: Surface,
    max_ext: int,
    workers: int = 1,
    cap: int = SCAN_CAP,
    only_ext: int | None = None,
    first: bool = False,
) -> list[SingularPoint]:
    """Common zeros of F and its partials in P^3(F_{q^i}) for i <= max_ext.

    Points already defined over a smaller scanned field are reported once,
    at the smallest extension.  An empty result is evidence, not proof.
    """
    q = S.field.q
    if q ** (3 * max_ext) > cap:
        raise CapacityExceeded(f"scanning P^3 over F_{q}^{max_ext} exceeds the cap {cap}")
    out: list[SingularPoint] = []
    exts = [only_ext] if only_ext else range(1, max_ext + 1)
    for j in exts:
        Fj, emb = field_extend(S.field, j)
        forms = [g.embed(emb) for g in jacobian_forms(S) if not g.is_zero()]
        for pt in kernels.common_zeros(Fj, forms, workers):
            if _defined_over_smaller(Fj, pt, j, q):
                continue
            out.append(SingularPoint(j, Fj, pt))
            if first:
                return out
    return out
