import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfcommit.algebra import fppoly
from surfcommit.algebra.field import GF, Field, field_extend, is_prime, prime_power
from surfcommit.algebra.mpoly import HomogPoly, monomial_basis
from surfcommit.algebra.upoly import NEG_INF, UniPoly
from surfcommit.errors import (
    DivisionByZero,
    FieldMismatch,
    InvalidDegree,
    Undefined,
    ValidationError,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (2, 5), (2, 6), (5, 2), (7, 2)]


def naive_mul(F: Field, a: int, b: int) -> int:
    """Schoolbook product of coefficient vectors reduced by the modulus (table-free oracle)."""
    p, k = F.p, F.k
    A, B = F.coeffs(a), F.coeffs(b)
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(A):
        for j, y in enumerate(B):
            prod[i + j] = (prod[i + j] + x * y) % p
    mod = list(F.modulus)
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i]
        if c:
            for j in range(k + 1):
                prod[i - k + j] = (prod[i - k + j] - c * mod[j]) % p
    return F.from_coeffs(prod[:k]).value


def test_primality_and_prime_powers():
    primes = [n for n in range(2, 200) if all(n % d for d in range(2, n))]
    assert [n for n in range(200) if is_prime(n)] == primes
    assert prime_power(256) == (2, 8)
    assert prime_power(7) == (7, 1)
    with pytest.raises(Exception):
        prime_power(12)


@pytest.mark.parametrize("p,k", [f for f in SMALL_FIELDS if f[0] ** f[1] <= 64])
def test_field_axioms_exhaustive(p, k):
    F = GF(p, k)
    q = F.q
    els = range(q)
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.mul(a, b) == naive_mul(F, a, b)
            assert F.add(a, b) == F.add(b, a)
    rng = np.random.default_rng(p * 100 + k)
    for a, b, c in rng.integers(0, q, size=(300, 3)):
        a, b, c = int(a), int(b), int(c)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))


@pytest.mark.parametrize("p,k", [f for f in SMALL_FIELDS if f[0] ** f[1] <= 64])
def test_frobenius_is_automorphism_fixing_prime_field(p, k):
    F = GF(p, k)
    images = [F.frobenius(a) for a in range(F.q)]
    assert sorted(images) == list(range(F.q))
    fixed = [a for a in range(F.q) if images[a] == a]
    assert fixed == list(range(p))  # constants c0 + 0*x + ... encode as c0
    for a in range(F.q):
        assert images[a] == F.pow(a, p)
        for b in range(0, F.q, 3):
            assert F.frobenius(F.mul(a, b)) == F.mul(images[a], images[b])
            assert F.frobenius(F.add(a, b)) == F.add(images[a], images[b])


def test_f4_multiplication():
    F = GF(2, 2)
    x = F.from_coeffs([0, 1])
    assert x * (x + 1) == F.one
    assert tuple(F.modulus) == (1, 1, 1)


def test_frobenius_additive_in_f9_all_pairs():
    F = GF(3, 2)
    for a, b in itertools.product(F.elements(), repeat=2):
        assert (a + b) ** 3 == a**3 + b**3


def test_inverse_of_zero_and_mixed_fields():
    F = GF(5)
    with pytest.raises(DivisionByZero):
        F.zero.inv()
    with pytest.raises(FieldMismatch):
        F(1) + GF(7)(1)
    with pytest.raises(ValidationError):
        GF(6)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
def test_field_axioms_randomized_large(a, b, c):
    F = GF(2, 16)
    assert F.mul(a, b) == naive_mul(F, a, b)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    if a:
        assert F.mul(a, F.inv(a)) == 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_large_prime_field_randomized(a, b):
    p = 1_000_003
    F = GF(p)
    assert F.mul(a % p, b % p) == (a * b) % p
    if a % p:
        assert F.mul(a % p, F.inv(a % p)) == 1


def test_field_extend_examples():
    F2 = GF(2)
    F4, emb = field_extend(F2, 2)
    assert F4.q == 4 and emb.map_int(1) == 1
    F64, emb = field_extend(F4, 3)
    assert F64.q == 64
    image = {emb.map_int(a) for a in range(4)}
    assert image == {a for a in range(64) if F64.pow(a, 4) == a}
    for a in range(4):
        for b in range(4):
            assert emb.map_int(F4.mul(a, b)) == F64.mul(emb.map_int(a), emb.map_int(b))
            assert emb.map_int(F4.add(a, b)) == F64.add(emb.map_int(a), emb.map_int(b))
    same, ident = field_extend(GF(7), 1)
    assert same == GF(7) and all(ident.map_int(a) == a for a in range(7))


def test_modulus_is_lowest_irreducible():
    assert fppoly.lowest_irreducible(2, 3) == [1, 1, 0, 1]
    for p, k in [(2, 4), (3, 3), (5, 2)]:
        f = fppoly.lowest_irreducible(p, k)
        assert fppoly.is_irreducible(f, p)
        # brute-force factor check on small cases
        roots = [x for x in range(p) if fppoly.evaluate(f, x, p) == 0]
        assert roots == []


def test_upoly_examples():
    F5 = GF(5)
    f = UniPoly(F5, [4, 0, 1])  # t^2 - 1
    g = UniPoly(F5, [4, 1])  # t - 1
    assert f.gcd(g) == g
    F2 = GF(2)
    a, b = UniPoly(F2, [1, 0, 0, 1]), UniPoly(F2, [0, 1, 1])
    assert (a * b).degree == 5
    F29 = GF(29)
    assert UniPoly.monomial(F29, 13).eval(3) == pow(3, 13, 29) == 19
    assert UniPoly(F5).degree == NEG_INF
    with pytest.raises(Undefined):
        UniPoly(F5).gcd(UniPoly(F5))


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.integers(0, 6), min_size=1, max_size=6),
    st.lists(st.integers(0, 6), min_size=1, max_size=6),
    st.lists(st.integers(0, 6), min_size=1, max_size=4),
)
def test_upoly_degree_additivity_and_compose(a, b, c):
    F = GF(7)
    A, B, C = UniPoly(F, a), UniPoly(F, b), UniPoly(F, c)
    if not A.is_zero() and not B.is_zero():
        assert (A * B).degree == A.degree + B.degree
    g = A.gcd(B) if not (A.is_zero() and B.is_zero()) else None
    if g is not None:
        assert g.lead() == 1
        assert A.divmod(g)[1].is_zero() and B.divmod(g)[1].is_zero()
    for x in range(7):
        assert A.compose(C).eval(x) == A.eval(C.eval(x))


def test_monomial_basis():
    assert len(monomial_basis(6)) == 84
    assert len(monomial_basis(4)) == 35
    assert list(monomial_basis(1)) == [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    for d in range(1, 13):
        basis = monomial_basis(d)
        assert len(basis) == (d + 3) * (d + 2) * (d + 1) // 6 == comb(d + 3, 3)
        assert all(sum(e) == d for e in basis)
        assert list(basis) == sorted(basis, key=lambda e: e[:3], reverse=True)
    with pytest.raises(InvalidDegree):
        monomial_basis(0)


def test_partials_examples():
    F2, F3, F5 = GF(2), GF(3), GF(5)
    assert HomogPoly(F2, 4, {(4, 0, 0, 0): 1}).partial(0).is_zero()
    d1 = HomogPoly(F3, 4, {(2, 2, 0, 0): 1}).partial(1)
    assert d1 == HomogPoly(F3, 3, {(2, 1, 0, 0): 2})
    rng = np.random.default_rng(5)
    F = HomogPoly.from_vector(F5, 4, [int(x) for x in rng.integers(0, 5, 35)])
    euler = HomogPoly(F5, 4)
    for i, Fi in enumerate(F.partials()):
        shifted = {tuple(e + (j == i) for j, e in enumerate(exps)): c for exps, c in Fi.terms.items()}
        euler = euler + HomogPoly(F5, 4, shifted)
    assert euler == F.scale(4)


def test_substitute_examples():
    F5, F3 = GF(5), GF(3)
    cubic = [UniPoly(F5, c) for c in ([1], [0, 1], [0, 0, 1], [0, 0, 0, 1])]
    Q = HomogPoly(F5, 2, {(1, 0, 0, 1): 1, (0, 1, 1, 0): 4})
    assert Q.substitute(cubic).is_zero()
    assert HomogPoly.variable(F5, 0).substitute(cubic) == UniPoly(F5, [1])
    fermat = HomogPoly(F3, 4, {(4, 0, 0, 0): 1, (0, 4, 0, 0): 1, (0, 0, 4, 0): 1, (0, 0, 0, 4): 1})
    line = [UniPoly(F3, [1]), UniPoly(F3, [0, 1]), UniPoly(F3), UniPoly(F3)]
    assert fermat.substitute(line) == UniPoly(F3, [1, 0, 0, 0, 1])


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(0, 6), min_size=35, max_size=35),
    st.lists(st.integers(0, 6), min_size=35, max_size=35),
    st.integers(0, 6),
    st.integers(0, 6),
    st.lists(st.lists(st.integers(0, 6), min_size=4, max_size=4), min_size=4, max_size=4),
)
def test_substitute_linear_and_degree_bounded(u, v, a, b, curve):
    F = GF(7)
    A, B = HomogPoly.from_vector(F, 4, u), HomogPoly.from_vector(F, 4, v)
    f = [UniPoly(F, c) for c in curve]
    lhs = (A.scale(a) + B.scale(b)).substitute(f)
    rhs = A.substitute(f).scale(a) + B.substitute(f).scale(b)
    assert lhs == rhs
    assert lhs.degree <= 4 * 3
    # pointwise oracle
    for t in range(7):
        pt = [g.eval(t) for g in f]
        assert A.substitute(f).eval(t) == A.evaluate([int(x.value) if hasattr(x, "value") else x for x in pt])
