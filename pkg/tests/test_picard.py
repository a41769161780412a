import random
from fractions import Fraction

import pytest
from helpers import cone_count, gram_det, synthetic_weil
from hypothesis import given, settings
from hypothesis import strategies as st

from surfcommit.algebra.field import GF
from surfcommit.algebra.mpoly import HomogPoly
from surfcommit.errors import (
    CapacityExceeded,
    InconsistentCounts,
    InsufficientData,
    ParseError,
    TheoremHypothesisViolated,
)
from surfcommit.picard import (
    Candidate,
    IntersectionData,
    WeilData,
    betti_b2,
    count_points,
    det_roots,
    factored_det,
    format_counts,
    intersection_det,
    parse_counts,
    picard_gate,
    q_multiplicity,
    symbolic_det,
    traces_from_polynomial,
    uniqueness_criterion,
    weil_reconstruct,
    weil_reconstruct_both,
)
from surfcommit.surface import Surface, smoothness_certify


def test_det_examples():
    assert intersection_det(4, 3, -2) == 0
    assert intersection_det(6, 3, 0) == 528 == gram_det(6, 3, 0)
    assert all(intersection_det(4, 3, dl) != 0 for dl in range(0, 10))


def test_symbolic_det_matches_independent_expansion():
    for d in range(1, 11):
        for m in range(1, 11):
            poly = symbolic_det(d, m)
            for dl in range(-50, 51):
                val = sum(c * dl**k for k, c in enumerate(poly))
                assert val == gram_det(d, m, dl) == factored_det(d, m, dl)


def test_misexpanded_determinant_differs():
    """Halving the last cofactor term, m^2(2+(d-4)m), breaks the root at delta = A."""
    def misexpanded(d, m, dl):
        a = 2 + (d - 4) * m
        return -d * dl * dl + 2 * m * m * dl + d * a * a + m * m * a

    for d in range(4, 11):
        for m in range(1, 11):
            A = -(2 + (d - 4) * m)
            assert gram_det(d, m, A) == 0
            assert misexpanded(d, m, A) != 0


def test_det_roots():
    assert det_roots(4, 3) == (Fraction(-2), Fraction(13, 2))
    assert det_roots(6, 3) == (Fraction(-8), Fraction(11))
    for m in range(1, 12):
        assert det_roots(4, m)[0] == -2
    for d in range(4, 11):
        for m in range(1, 11):
            for r in det_roots(d, m):
                assert factored_det(d, m, r) == 0
                if r.denominator == 1:
                    assert gram_det(d, m, int(r) + 1) != 0 or int(r) + 1 in det_roots(d, m)
                    assert gram_det(d, m, int(r) - 1) != 0 or int(r) - 1 in det_roots(d, m)


def test_adjunction():
    for d in range(1, 12):
        for m in range(1, 12):
            D = IntersectionData(d, m)
            assert D.Dsq + (d - 4) * m == -2 and D.H2 == d and D.HD == m


def test_criterion_examples():
    assert uniqueness_criterion(6, 3).verdict == "holds_by_inequality"
    assert uniqueness_criterion(4, 3).verdict == "holds_by_nonintegrality"
    r = uniqueness_criterion(4, 8)
    assert r.verdict == "fails" and r.roots[1] == 34
    with pytest.raises(TheoremHypothesisViolated):
        uniqueness_criterion(3, 1)


def test_criterion_against_direct_search():
    """Oracle: scan integer delta in [0, m^2] for a vanishing Gram determinant."""
    for d in range(4, 11):
        for m in range(1, 16):
            r = uniqueness_criterion(d, m)
            bad = [dl for dl in range(0, m * m + 1) if gram_det(d, m, dl) == 0]
            if bad:
                assert r.verdict == "fails"
            elif m < Fraction(2 * d * (d - 4), d - 2) and r.roots[1] > m * m:
                assert r.verdict == "holds_by_inequality"
            else:
                assert r.verdict == "holds_by_nonintegrality"


def test_inequality_alone_is_not_sufficient():
    # 6 < 2*8*4/6 but the Gram determinant vanishes at delta = 35 <= 36
    assert 6 < Fraction(64, 6)
    assert gram_det(8, 6, 35) == 0
    r = uniqueness_criterion(8, 6)
    assert r.verdict == "fails" and "35" in r.justification


def test_betti():
    for d, b in [(2, 2), (4, 22), (6, 106)]:
        chi = d * (d * d - 4 * d + 6)
        assert betti_b2(d) == b == chi - 2


# -- point counts -----------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 5])
def test_hyperplane_counts(q):
    S = Surface(HomogPoly.variable(GF(q), 0))
    for i in range(1, 4):
        if q ** (3 * i) > 2**27:
            continue
        assert count_points(S, i) == q ** (2 * i) + q**i + 1


def test_quadric_and_reducible_counts():
    F3 = GF(3)
    Q = Surface(HomogPoly(F3, 2, {(1, 0, 0, 1): 1, (0, 1, 1, 0): 2}))
    assert count_points(Q, 1) == 16 == cone_count(Q, 1)
    for q in (2, 3, 5, 7):
        S = Surface(HomogPoly(GF(q), 2, {(1, 1, 0, 0): 1}))
        assert count_points(S, 1) == 2 * (q * q + q + 1) - (q + 1)


def test_fermat_count_against_cone_oracle():
    F5 = GF(5)
    S = Surface(HomogPoly(F5, 4, {(4, 0, 0, 0): 1, (0, 4, 0, 0): 1, (0, 0, 4, 0): 1, (0, 0, 0, 4): 1}))
    assert count_points(S, 1) == cone_count(S, 1)
    with pytest.raises(CapacityExceeded):
        count_points(S, 5)


def test_trace_bound_on_smooth_surface():
    F2 = GF(2)
    rng = random.Random(7)
    tested = 0
    while tested < 3:
        S = Surface.from_vector(F2, 4, [rng.randrange(2) for _ in range(35)])
        if not smoothness_certify(S, scan_ext=0).smooth:
            continue
        tested += 1
        counts = [count_points(S, i) for i in range(1, 5)]
        data = WeilData(2, 4, counts)
        for i, t in enumerate(data.traces, start=1):
            assert abs(t) <= 22 * 2**i


# -- Weil reconstruction ---------------------------------------------------------


def test_weil_examples():
    d = WeilData(2, 2, b2=2, traces=traces_from_polynomial([4, -4, 1], 1))
    assert d.traces == [4]
    (c,) = weil_reconstruct(d, 1)
    assert c.coeffs == [4, -4, 1] and d.picard_upper == 2
    assert traces_from_polynomial([4, -4, 1], 4) == [2 ** (i + 1) for i in range(1, 5)]
    coeffs = [81, 0, -18, 0, 1]  # (T-3)^2 (T+3)^2
    d = WeilData(3, 4, b2=4, traces=traces_from_polynomial(coeffs, 4))
    cands = weil_reconstruct_both(d)
    assert [c.coeffs for c in cands] == [coeffs] and cands[0].q_multiplicity == 2
    d = WeilData(2, 4, b2=0, traces=[])
    (c,) = weil_reconstruct(d, 1)
    assert c.coeffs == [1] and c.q_multiplicity == 0


def test_weil_errors():
    with pytest.raises(InsufficientData):
        weil_reconstruct(WeilData(2, 4, counts=[5, 17]), 1)
    with pytest.raises(InconsistentCounts):
        weil_reconstruct(WeilData(2, 2, b2=4, traces=[1, 1, 0, 0]), 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from([2, 3, 5]), st.integers(0, 8))
def test_weil_roundtrip(seed, q, b2):
    coeffs, sign, mult = synthetic_weil(q, b2, random.Random(seed))
    data = WeilData(q, 4, b2=b2, traces=traces_from_polynomial(coeffs, b2 // 2))
    cands = weil_reconstruct(data, sign)
    assert [c.coeffs for c in cands] == [coeffs]
    assert cands[0].q_multiplicity == mult == q_multiplicity(coeffs, q)
    full = WeilData(q, 4, b2=b2, traces=traces_from_polynomial(coeffs, b2 + 2))
    assert coeffs in [c.coeffs for c in weil_reconstruct_both(full)]


def test_gate():
    c2 = Candidate(1, [4, -4, 1], 2)
    c4 = Candidate(1, [16, -32, 24, -8, 1], 4)
    assert picard_gate([c2], 4).verdict == "verified_two"
    assert picard_gate([c2], 5).verdict == "inconclusive"
    assert picard_gate([c2, c4], 4).verdict == "inconclusive"
    assert picard_gate([c4], 4).verdict == "not_two"
    assert picard_gate([], 4).verdict == "inconclusive"


def test_counts_file():
    text = format_counts([5, 17, 65])
    assert text == "1 5\n2 17\n3 65\n"
    assert parse_counts(text) == [5, 17, 65]
    with pytest.raises(ParseError):
        parse_counts("2 5\n")
    with pytest.raises(ParseError):
        parse_counts("1 x\n")
