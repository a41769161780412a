import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surfcommit.algebra import fppoly
from surfcommit.errors import CapacityExceeded, DegenerateValue, InvalidInstance, ParseError
from surfcommit.funcfield import (
    SUnitInstance,
    format_instance,
    frobenius_second_solution,
    injectivity_scan,
    parse_instance,
    random_sunit_instance,
    rationals_of_height,
    sparse_to_dense,
    sunit_bound_check,
    xy_value,
    zagier_collision_search,
    zagier_value,
)


def naive_collisions(p, m, D):
    """Dictionary oracle over the same box, no packing."""
    polys = []
    for n in range(p ** (D + 1)):
        digits = [(n // p**i) % p for i in range(D + 1)]
        polys.append(fppoly.trim(digits))
    seen, out = {}, 0
    for x in polys:
        for y in polys:
            key = tuple(xy_value(x, y, p, m))
            out += key in seen
            seen.setdefault(key, (x, y))
    return out, len(seen)


def test_injectivity_p29_deg1():
    scan = injectivity_scan(29, 13, 1)
    assert scan.pairs_scanned == 29**4
    assert scan.collisions == [] and scan.constant_collisions == []


@pytest.mark.parametrize("p", [17, 19, 23, 31])
def test_no_collisions_under_hypotheses(p):
    assert p % 13 and (p - 1) % 13 and p // 13 >= 1
    scan = injectivity_scan(p, 13, 1)
    assert scan.collisions == [] and scan.constant_collisions == []


def test_p2_m2_scan_is_injective():
    # in characteristic 2, x^2 + t y^2 recovers x and y from the even and odd parts
    scan = injectivity_scan(2, 2, 1)
    assert scan.collisions == [] and scan.constant_collisions == []
    assert naive_collisions(2, 2, 1)[0] == 0


@pytest.mark.parametrize("p,m,D", [(3, 2, 1), (5, 2, 1), (3, 3, 1), (7, 3, 1), (5, 4, 1)])
def test_scan_matches_naive_oracle(p, m, D):
    scan = injectivity_scan(p, m, D)
    for (a, b), (c, d) in scan.collisions + scan.constant_collisions:
        assert (a, b) != (c, d)
        assert xy_value(list(a), list(b), p, m) == xy_value(list(c), list(d), p, m)
    total, distinct = naive_collisions(p, m, D)
    # each value with k preimages yields k(k-1)/2 pairs in the scan and k-1 repeats in the oracle
    assert (len(scan.collisions) + len(scan.constant_collisions) == 0) == (total == 0)
    assert scan.pairs_scanned - distinct == total


def test_scan_budget():
    with pytest.raises(CapacityExceeded):
        injectivity_scan(29, 13, 3)


def test_frobenius_examples():
    r = frobenius_second_solution([0, 1], [1], 2)
    assert r.q == 4096
    assert r.identity_sparse and r.identity_dense and r.distinct
    assert r.k == [0, 1] + [0] * 11 + [1]
    r = frobenius_second_solution([3], [], 5, dense=False)
    assert r.identity_sparse and not r.distinct
    r = frobenius_second_solution([1], [1], 3)
    assert r.q == 531441 and r.identity_sparse and r.identity_dense
    with pytest.raises(DegenerateValue):
        frobenius_second_solution([], [], 2)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.lists(st.integers(0, 4), min_size=1, max_size=3))
def test_sparse_frobenius_matches_repeated_squaring(p, j, f):
    f = fppoly.trim([c % p for c in f])
    q = p**j
    assert sparse_to_dense(fppoly.frobenius_power(f, q)) == fppoly.power(f, q, p)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=3), st.lists(st.integers(0, 1), min_size=1, max_size=3))
def test_frobenius_identity_and_distinctness(x, y):
    x, y = fppoly.trim(x), fppoly.trim(y)
    if not x and not y:
        return
    r = frobenius_second_solution(x, y, 2)
    assert r.identity_sparse and r.identity_dense
    # the second solution coincides with (x, y) exactly when one coordinate is 0
    assert r.distinct == bool(x and y)


def test_zagier():
    assert zagier_value(Fraction(1), Fraction(0)) == 1
    scan = zagier_collision_search(20)
    assert scan.collisions == []
    assert scan.zero_preimages == [(Fraction(0), Fraction(0))]
    assert scan.rationals == len(rationals_of_height(20))
    with pytest.raises(CapacityExceeded):
        zagier_collision_search(200)


def test_zagier_oracle_small():
    rs = rationals_of_height(4)
    vals = {}
    for x in rs:
        for y in rs:
            vals.setdefault(zagier_value(x, y), []).append((x, y))
    assert all(len(v) == 1 for v in vals.values())
    assert zagier_collision_search(4).collisions == []


def test_sunit_examples():
    r = sunit_bound_check(SUnitInstance(5, [([0, 1], [1]), ([1, 4], [1])]))
    assert (r.S_size, r.bound, r.degrees, r.verdict) == (3, 1, [1, 1], "holds")
    r = sunit_bound_check(SUnitInstance(5, [([0, 0, 0, 0, 0, 1], [1]), ([1, 0, 0, 0, 0, 4], [1])]))
    assert r.morphism_degree == 5 and not r.hypotheses_hold and not r.bound_holds
    assert r.verdict == "not_asserted"
    r = sunit_bound_check(SUnitInstance(5, [([3], [1]), ([3], [1])]))
    assert not r.independent and r.verdict == "not_asserted"
    with pytest.raises(InvalidInstance):
        sunit_bound_check(SUnitInstance(5, [([1], [1]), ([1], [1])]))


def test_sunit_reduction_and_places():
    # (t^2 - 1)/(t - 1) reduces to t + 1; 1/(t^2+2) over F_5 has two conjugate places
    inst = SUnitInstance(5, [([4, 0, 1], [4, 1]), ([0, 4], [1])])
    assert inst.units[0] == ([1, 1], [1])
    assert inst.sums_to_one()
    inst = SUnitInstance(5, [([1], [2, 0, 1]), ([1, 0, 1], [2, 0, 1])])
    assert inst.S_size() == 2 + 2 + 1
    assert inst.degrees() == [2, 2]


@pytest.mark.parametrize("p", [5, 7])
def test_random_sunit_instances_never_contradict(p):
    rng = random.Random(p)
    checked = 0
    while checked < 50:
        try:
            inst = random_sunit_instance(p, rng.choice([2, 3, 4]), rng)
        except InvalidInstance:
            continue
        r = sunit_bound_check(inst)
        assert not r.contradiction
        checked += 1


def test_instance_file_roundtrip():
    inst = SUnitInstance(7, [([0, 1], [1]), ([1, 6], [1])])
    text = format_instance(inst)
    back = parse_instance(text)
    assert back.units == inst.units and back.p == 7
    with pytest.raises(ParseError):
        parse_instance("p=5\nu=1/\n")
    with pytest.raises(ParseError):
        parse_instance("u=1/1\n")
