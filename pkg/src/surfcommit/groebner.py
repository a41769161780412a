"""Gröbner bases over finite fields.

Two independent engines:

* ``buchberger``: classical pair-queue algorithm on sparse polynomials in any
  number of variables, with the coprime-leading-term and chain criteria.
* ``macaulay_basis``: for homogeneous ideals in which every monomial of some
  degree D lies in the ideal, the reduced basis is read off from row-reduced
  Macaulay matrices in degrees up to D.  This is the fast path used to certify
  smoothness; tests compare it against ``buchberger``.

Polynomials are dicts mapping exponent tuples to nonzero field ints.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from surfcommit.algebra.field import Field
from surfcommit.algebra.linalg import rref
from surfcommit.algebra.mpoly import HomogPoly
from surfcommit.errors import GroebnerBudgetExceeded, ValidationError

Poly = dict

ORDERS = ("grevlex", "lex")


def order_key(order: str):
    if order == "grevlex":
        return lambda e: (sum(e), tuple(-x for x in reversed(e)))
    if order == "lex":
        return lambda e: e
    raise ValidationError(f"unknown monomial order {order!r}")


def leading(f: Poly, key) -> tuple:
    return max(f, key=key)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_mono(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add_mono(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _axpy(F: Field, f: Poly, c: int, mono, g: Poly) -> Poly:
    """f - c * mono * g, in place on f."""
    for e, v in g.items():
        e2 = _add_mono(e, mono)
        nv = F.sub(f.get(e2, 0), F.mul(c, v))
        if nv:
            f[e2] = nv
        else:
            f.pop(e2, None)
    return f


def _monic(F: Field, f: Poly, key) -> Poly:
    inv = F.inv(f[leading(f, key)])
    return {e: F.mul(inv, v) for e, v in f.items()}


def normal_form(F: Field, f: Poly, basis: list[Poly], order: str = "grevlex") -> Poly:
    """Full reduction of f modulo ``basis`` (remainder of multivariate division)."""
    key = order_key(order)
    leads = [(leading(g, key), g) for g in basis if g]
    p = dict(f)
    r: Poly = {}
    while p:
        lm = leading(p, key)
        c = p[lm]
        for gl, g in leads:
            if _divides(gl, lm):
                _axpy(F, p, F.div(c, g[gl]), _sub_mono(lm, gl), g)
                break
        else:
            r[lm] = c
            del p[lm]
    return r


def reduce_basis(F: Field, basis: list[Poly], order: str = "grevlex") -> list[Poly]:
    """Minimal, monic, fully inter-reduced basis sorted by leading monomial (descending)."""
    key = order_key(order)
    gs = [_monic(F, g, key) for g in basis if g]
    gs.sort(key=lambda g: key(leading(g, key)))
    minimal: list[Poly] = []
    for g in gs:
        lm = leading(g, key)
        if not any(_divides(leading(h, key), lm) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        out.append(_monic(F, normal_form(F, g, others, order), key))
    out.sort(key=lambda g: key(leading(g, key)), reverse=True)
    return out


def buchberger(F: Field, generators: list[Poly], order: str = "grevlex", max_pairs: int = 20000) -> list[Poly]:
    """Reduced Gröbner basis; raises GroebnerBudgetExceeded past ``max_pairs`` S-pairs."""
    key = order_key(order)
    G: list[Poly] = []
    for g in generators:
        g = normal_form(F, g, G, order) if G else dict(g)
        if g:
            G.append(_monic(F, g, key))
    lms = [leading(g, key) for g in G]
    pairs = [(i, j) for j in range(len(G)) for i in range(j)]
    processed = 0
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda ij: key(_lcm(lms[ij[0]], lms[ij[1]])), reverse=True)
        i, j = pairs.pop()
        processed += 1
        if processed > max_pairs:
            raise GroebnerBudgetExceeded(f"more than {max_pairs} S-pairs processed")
        a, b = lms[i], lms[j]
        lcm = _lcm(a, b)
        if lcm == _add_mono(a, b):
            continue  # coprime leading terms
        if any(
            k not in (i, j)
            and _divides(lms[k], lcm)
            and (min(i, k), max(i, k)) not in pairs
            and (min(j, k), max(j, k)) not in pairs
            for k in range(len(G))
        ):
            continue  # chain criterion
        s: Poly = {}
        _axpy(F, s, F.neg(1), _sub_mono(lcm, a), G[i])
        _axpy(F, s, 1, _sub_mono(lcm, b), G[j])
        r = normal_form(F, s, G, order)
        if r:
            G.append(_monic(F, r, key))
            lms.append(leading(G[-1], key))
            n = len(G) - 1
            pairs.extend((k, n) for k in range(n))
    return reduce_basis(F, G, order)


def is_zero_dimensional(basis: list[Poly], nvars: int, order: str = "grevlex") -> bool:
    """Finitely many standard monomials iff each variable has a pure-power leading term."""
    key = order_key(order)
    seen = set()
    for g in basis:
        lm = leading(g, key)
        support = [i for i, x in enumerate(lm) if x]
        if len(support) == 1:
            seen.add(support[0])
    return len(seen) == nvars


def homog_to_poly(f: HomogPoly) -> Poly:
    return dict(f.terms)


@dataclass
class GroebnerBasis:
    field: Field
    order: str
    nvars: int
    polys: list

    def leading_monomials(self) -> list[tuple]:
        key = order_key(self.order)
        return [leading(g, key) for g in self.polys]

    def reduce(self, f: Poly) -> Poly:
        return normal_form(self.field, f, self.polys, self.order)

    def contains(self, f: Poly) -> bool:
        return not self.reduce(f)

    def is_zero_dimensional(self) -> bool:
        return is_zero_dimensional(self.polys, self.nvars, self.order)

    def serialize(self) -> str:
        """Canonical text: one polynomial per line, terms by descending monomial."""
        key = order_key(self.order)
        lines = [f"order={self.order} q={self.field.label} n={len(self.polys)}"]
        for g in self.polys:
            terms = sorted(g.items(), key=lambda t: key(t[0]), reverse=True)
            lines.append(" ".join(f"{v}*{'.'.join(map(str, e))}" for e, v in terms))
        return "\n".join(lines) + "\n"


def groebner(generators, order: str = "grevlex", field: Field | None = None, max_pairs: int = 20000) -> GroebnerBasis:
    """Buchberger on HomogPoly (or dict) generators; verifies input membership."""
    gens = list(generators)
    if not gens:
        raise ValidationError("need at least one generator")
    if isinstance(gens[0], HomogPoly):
        field = gens[0].field
        polys = [homog_to_poly(g) for g in gens]
        nvars = 4
    else:
        if field is None:
            raise ValidationError("dict generators need an explicit field")
        polys = [dict(g) for g in gens]
        nvars = len(next(iter(p for p in polys if p)))
    basis = buchberger(field, [p for p in polys if p], order, max_pairs)
    gb = GroebnerBasis(field, order, nvars, basis)
    for p in polys:
        if p and not gb.contains(p):
            raise AssertionError("generator not reduced to zero by its own Gröbner basis")
    return gb


# -- linear-algebra route -------------------------------------------------------


@functools.lru_cache(maxsize=None)
def grevlex_monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All monomials of the given degree, descending in grevlex."""
    key = order_key("grevlex")
    monos = [
        tuple(c.count(i) for i in range(nvars))
        for c in itertools.combinations_with_replacement(range(nvars), degree)
    ]
    return tuple(sorted(monos, key=key, reverse=True))


@functools.lru_cache(maxsize=None)
def _shift_table(nvars: int, fdeg: int, degree: int):
    """Column index of a * s for every monomial a of degree fdeg and shift s."""
    cols = grevlex_monomials(nvars, degree)
    index = {e: i for i, e in enumerate(cols)}
    terms = grevlex_monomials(nvars, fdeg)
    shifts = grevlex_monomials(nvars, degree - fdeg)
    table = np.array([[index[_add_mono(a, s)] for s in shifts] for a in terms], dtype=np.int64)
    return {a: i for i, a in enumerate(terms)}, table


def _macaulay_rows(F: Field, forms: list[HomogPoly], degree: int):
    cols = grevlex_monomials(4, degree)
    blocks = []
    for f in forms:
        if f.is_zero() or f.degree > degree:
            continue
        where, table = _shift_table(4, f.degree, degree)
        block = np.zeros((table.shape[1], len(cols)), dtype=np.int64)
        rows = np.arange(table.shape[1])
        for e, c in f.terms.items():
            block[rows, table[where[e]]] = c
        blocks.append(block)
    if not blocks:
        return np.zeros((0, len(cols)), dtype=np.int64), cols
    return np.concatenate(blocks), cols


@dataclass
class MacaulayResult:
    saturated_degree: int | None  # least degree D with every monomial of degree D in the ideal
    basis: list | None  # reduced grevlex basis when saturated_degree is not None
    ranks: dict


def macaulay_basis(F: Field, forms: list[HomogPoly], top_degree: int) -> MacaulayResult:
    """Reduced grevlex basis of a homogeneous ideal containing all degree-D monomials.

    Builds Macaulay matrices in each degree up to ``top_degree``.  If some
    degree D <= top_degree has full rank, the ideal contains every monomial of
    degree D, its leading-term ideal is generated in degrees <= D, and the
    reduced basis consists of the row-reduced rows whose leading monomials are
    minimal generators.  Otherwise ``saturated_degree`` is None.
    """
    lo = min(f.degree for f in forms if not f.is_zero())
    ranks: dict = {}
    leads: list[tuple] = []
    basis: list[Poly] = []
    for e in range(lo, top_degree + 1):
        M, cols = _macaulay_rows(F, forms, e)
        R, pivots = rref(F, M) if len(M) else (M, [])
        ranks[e] = len(pivots)
        for r, c in enumerate(pivots):
            lm = cols[c]
            if any(_divides(l, lm) for l in leads):
                continue
            row = R[r]
            basis.append({cols[j]: int(row[j]) for j in np.flatnonzero(row)})
            leads.append(lm)
        if len(pivots) == len(cols):
            key = order_key("grevlex")
            basis.sort(key=lambda g: key(leading(g, key)), reverse=True)
            return MacaulayResult(e, basis, ranks)
    return MacaulayResult(None, None, ranks)
