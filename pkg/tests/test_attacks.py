import itertools

import pytest

from surfcommit.algebra.field import GF
from surfcommit.algebra.mpoly import HomogPoly
from surfcommit.attacks import (
    brute_force_curves,
    coefficient_system,
    groebner_recovery,
    normalized_space_size,
    uniqueness_audit,
)
from surfcommit.curve import curve_validate, curves_equal_as_sets
from surfcommit.errors import CapacityExceeded, InvalidCurve
from surfcommit.protocol import commit_transcript, derive_message, derive_randomness, make_params
from surfcommit.surface import Surface

F2 = GF(2)
QUADRIC = Surface(HomogPoly(F2, 2, {(1, 0, 0, 1): 1, (0, 1, 1, 0): 1}))


def lines_on(S: Surface):
    """Oracle: lines of P^3(F_2) all of whose 3 rational points lie on S.

    Over F_2 a line with 3 rational zeros of a quadric lies on it (a conic
    section cut by the line has at most 2 points otherwise).
    """
    pts = [p for p in itertools.product(range(2), repeat=4) if any(p)]
    lines = set()
    for a, b in itertools.combinations(pts, 2):
        c = tuple(x ^ y for x, y in zip(a, b))
        lines.add(frozenset((a, b, c)))
    return [ln for ln in lines if all(S.F.evaluate(p) == 0 for p in ln)]


def test_quadric_has_six_lines():
    res = brute_force_curves(QUADRIC, 1)
    assert len(res.curves_found) == 6 == len(lines_on(QUADRIC))
    assert res.inspected == res.search_space_size == normalized_space_size(2, 8) == 255
    for c in res.curves_found:
        assert QUADRIC.F.substitute(c.f).is_zero()
        assert curve_validate(c).valid
    for a, b in itertools.combinations(res.curves_found, 2):
        assert not curves_equal_as_sets(a, b)


def test_stable_order():
    a = brute_force_curves(QUADRIC, 1)
    b = brute_force_curves(QUADRIC, 1, workers=2)
    assert [c.coefficient_lists() for c in a.curves_found] == [c.coefficient_lists() for c in b.curves_found]


def test_hyperplane_curves_are_planar():
    S = Surface(HomogPoly.variable(F2, 0))
    res = brute_force_curves(S, 2)
    assert res.exhaustive and res.inspected == 4095
    assert res.curves_found
    for c in res.curves_found:
        assert c.f[0].is_zero()


def test_budget_exceeded_partial():
    with pytest.raises(CapacityExceeded) as exc:
        brute_force_curves(QUADRIC, 2, budget=1000)
    partial = exc.value.partial
    assert not partial.exhaustive and partial.inspected <= 1000


def _committed(q, label):
    params = make_params(q, 4, 3)
    for k in range(40):
        lab = label + str(k).encode()
        try:
            return params, commit_transcript(derive_message(params, lab), derive_randomness(params, lab), params)
        except InvalidCurve:
            continue
    raise AssertionError


def test_committed_curve_found():
    params, tr = _committed(2, b"bf")
    res = brute_force_curves(tr.commitment.surface, 3)
    assert res.exhaustive
    assert any(curves_equal_as_sets(tr.opening.curve, c) for c in res.curves_found)


def test_audit_small():
    params = make_params(2, 4, 3)
    rep = uniqueness_audit(params, 12, seed=b"unit", min_successes=2)
    assert len(rep.trials) == 2
    assert all(t.committed_found for t in rep.trials)
    assert sum(rep.distribution().values()) == 2
    assert all(k < 12 for k, _ in rep.excluded)


def test_coefficient_system_and_groebner_harness():
    eqs = coefficient_system(QUADRIC, 1, fixed={0: 1})
    assert eqs
    res = groebner_recovery(QUADRIC, 1, fixed={0: 1, 1: 0}, max_pairs=3000)
    assert res.status in ("solved", "budget_exceeded")
    assert res.nvars == 8
