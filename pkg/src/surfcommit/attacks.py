"""Exhaustive curve recovery on committed surfaces and uniqueness audits."""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from surfcommit.algebra.field import Field, extension_for
from surfcommit.curve import (
    RationalCurve,
    SchemeParams,
    curve_validate,
    curves_equal_as_sets,
)
from surfcommit.errors import CapacityExceeded, CommitFailed, GroebnerBudgetExceeded, InvalidCurve, TheoremHypothesisViolated
from surfcommit.groebner import buchberger, is_zero_dimensional
from surfcommit.picard import uniqueness_criterion
from surfcommit.protocol import commit_transcript, derive_message, derive_randomness
from surfcommit.surface import Surface, smoothness_certify

BLOCK = 2**15


@dataclass
class AttackResult:
    curves_found: list[RationalCurve]
    search_space_size: int
    inspected: int
    contained: int
    wall_time: float
    exhaustive: bool = True
    invalid_contained: int = 0
    smooth_flags: list[bool] = field(default_factory=list)

    @property
    def smooth_curves(self) -> list[RationalCurve]:
        """Found curves whose parametrization is unramified (smooth rational curves)."""
        return [c for c, s in zip(self.curves_found, self.smooth_flags) if s]


def normalized_space_size(q: int, n: int) -> int:
    """Nonzero vectors of length n over F_q with first nonzero entry 1."""
    return (q**n - 1) // (q - 1)


def _blocks(q: int, n: int):
    """(lead position, lo, hi) index ranges covering the normalized space in order."""
    out = []
    for lead in range(n):
        size = q ** (n - 1 - lead)
        for lo in range(0, size, BLOCK):
            out.append((lead, lo, min(size, lo + BLOCK)))
    return out


def _block_vectors(q: int, n: int, lead: int, lo: int, hi: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.int64)
    vec = np.zeros((hi - lo, n), dtype=np.int64)
    vec[:, lead] = 1
    for pos in range(n - 1, lead, -1):
        vec[:, pos] = idx % q
        idx = idx // q
    return vec


def _contained_mask(S: Surface, m: int, vec: np.ndarray, ext: Field, emb) -> np.ndarray:
    """Rows whose curve satisfies F(f0,...,f3) = 0 identically.

    F(f(t)) has degree <= dm < |ext|, so vanishing on every t in ext proves it.
    """
    ts = np.arange(ext.q, dtype=np.int64)
    tpow = [np.ones_like(ts)]
    for _ in range(m):
        tpow.append(ext.vmul(tpow[-1], ts))
    coords = []
    for i in range(4):
        acc = np.zeros((vec.shape[0], ext.q), dtype=np.int64)
        for j in range(m + 1):
            c = emb.map_array(vec[:, i * (m + 1) + j])
            acc = ext.vadd(acc, ext.vmul(c[:, None], tpow[j][None, :]))
        coords.append(acc)
    vals = S.F.embed(emb).evaluate_arrays(coords, ext)
    return np.all(vals == 0, axis=1)


def _scan_task(args):
    S, m, (lead, lo, hi) = args
    q = S.field.q
    n = 4 * (m + 1)
    ext, emb = extension_for(S.field, S.d * m + 1)
    vec = _block_vectors(q, n, lead, lo, hi)
    mask = _contained_mask(S, m, vec, ext, emb)
    return hi - lo, vec[mask].tolist()


def brute_force_curves(S: Surface, m: int, budget: int = 2**16, workers: int = 1) -> AttackResult:
    """All valid degree-m curves on S, up to scalar and reparametrization.

    Enumerates every coefficient vector with first nonzero entry 1, keeps
    those on the surface, validates them and deduplicates as point sets.
    Results keep enumeration order, so they are canonical.
    """
    t0 = time.perf_counter()
    q, n = S.field.q, 4 * (m + 1)
    size = normalized_space_size(q, n)
    blocks = _blocks(q, n)
    exhaustive = size <= budget
    if not exhaustive:
        kept, total = [], 0
        for b in blocks:
            if total + (b[2] - b[1]) > budget:
                break
            kept.append(b)
            total += b[2] - b[1]
        blocks = kept
    tasks = [(S, m, b) for b in blocks]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_task, tasks))
    else:
        parts = [_scan_task(t) for t in tasks]
    inspected = sum(p[0] for p in parts)
    hits = [v for p in parts for v in p[1]]
    found: list[RationalCurve] = []
    smooth: list[bool] = []
    invalid = 0
    for v in hits:
        c = RationalCurve.from_ints(S.field, [v[i * (m + 1) : (i + 1) * (m + 1)] for i in range(4)], m)
        if max((g.degree for g in c.f if not g.is_zero()), default=-1) != m:
            invalid += 1
            continue
        rep = curve_validate(c)
        if not rep.valid:
            invalid += 1
            continue
        if not any(curves_equal_as_sets(c, other) for other in found):
            found.append(c)
            smooth.append(bool(rep.unramified_on_sample))
    res = AttackResult(found, size, inspected, len(hits), time.perf_counter() - t0, exhaustive, invalid, smooth)
    if not exhaustive:
        raise CapacityExceeded(f"normalized space of {size} tuples exceeds the budget {budget}", res)
    return res


@dataclass
class TrialRecord:
    index: int
    committed: RationalCurve
    curves_found: int  # distinct smooth rational degree-m curves
    valid_curves: int  # distinct valid curves, singular ones included
    committed_found: bool
    smooth: bool
    criterion: str
    wall_time: float

    @property
    def flagged(self) -> bool:
        return self.curves_found >= 2


@dataclass
class AuditReport:
    params: SchemeParams
    trials: list[TrialRecord] = field(default_factory=list)
    excluded: list[tuple[int, str]] = field(default_factory=list)

    def distribution(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for t in self.trials:
            out[t.curves_found] = out.get(t.curves_found, 0) + 1
        return dict(sorted(out.items()))

    def flagged(self) -> list[TrialRecord]:
        return [t for t in self.trials if t.flagged]

    def gated(self) -> list[TrialRecord]:
        """Trials whose surface passed smoothness and whose (d, m) pass the criterion."""
        return [t for t in self.trials if t.smooth and t.criterion != "fails"]


def uniqueness_audit(
    params: SchemeParams,
    trials: int,
    seed: bytes = b"audit",
    budget: int = 2**16,
    workers: int = 1,
    min_successes: int | None = None,
) -> AuditReport:
    """Commit ``trials`` times and brute-force every committed surface.

    With ``min_successes`` the audit stops once that many commits succeeded.
    """
    try:
        criterion = uniqueness_criterion(params.d, params.m).verdict
    except TheoremHypothesisViolated:
        criterion = "not_applicable"
    report = AuditReport(params)
    for k in range(trials):
        if min_successes is not None and len(report.trials) >= min_successes:
            break
        t0 = time.perf_counter()
        label = seed + b"|" + str(k).encode()
        msg = derive_message(params, label)
        rnd = derive_randomness(params, label)
        try:
            tr = commit_transcript(msg, rnd, params)
        except (InvalidCurve, CommitFailed) as exc:
            report.excluded.append((k, f"{type(exc).__name__}: {exc}"))
            continue
        S = tr.commitment.surface
        curve = tr.opening.curve
        res = brute_force_curves(S, params.m, budget, workers)
        hit = any(curves_equal_as_sets(curve, c) for c in res.smooth_curves)
        smooth = smoothness_certify(S, scan_ext=0).smooth
        report.trials.append(
            TrialRecord(
                k,
                curve,
                len(res.smooth_curves),
                len(res.curves_found),
                hit,
                smooth,
                criterion,
                time.perf_counter() - t0,
            )
        )
    return report


# -- algebraic recovery harness ----------------------------------------------------


@dataclass
class GroebnerAttackResult:
    status: str  # solved | budget_exceeded
    nvars: int
    equations: int
    basis_size: int
    wall_time: float
    zero_dimensional: bool | None = None


def coefficient_system(S: Surface, m: int, fixed: dict | None = None) -> list[dict]:
    """Equations in the 4(m+1) curve coefficients expressing F(f0,...,f3) = 0.

    Each coefficient of t^k in F(f) is a form of degree d in the unknowns.
    Field equations c^q - c restrict to F_q-rational solutions; ``fixed`` maps
    unknown indices to values (e.g. to normalize one coefficient to 1).
    """
    F = S.field
    n = 4 * (m + 1)
    fixed = fixed or {}

    def var(idx):
        e = [0] * n
        e[idx] = 1
        return tuple(e)

    # coordinate polynomials f_i(t) as lists over t of polynomials in the unknowns
    coords = []
    for i in range(4):
        fi = []
        for j in range(m + 1):
            idx = i * (m + 1) + j
            if idx in fixed:
                fi.append({tuple([0] * n): fixed[idx]} if fixed[idx] else {})
            else:
                fi.append({var(idx): 1})
        coords.append(fi)

    def pmul(a, b):
        out: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                v = F.add(out.get(e, 0), F.mul(ca, cb))
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return out

    def tmul(A, B):
        out = [dict() for _ in range(len(A) + len(B) - 1)]
        for i, a in enumerate(A):
            for j, b in enumerate(B):
                prod = pmul(a, b)
                acc = out[i + j]
                for e, c in prod.items():
                    v = F.add(acc.get(e, 0), c)
                    if v:
                        acc[e] = v
                    else:
                        acc.pop(e, None)
        return out

    total = [dict() for _ in range(S.d * m + 1)]
    one = [{tuple([0] * n): 1}]
    for exps, c in S.F.terms.items():
        term = one
        for i, k in enumerate(exps):
            for _ in range(k):
                term = tmul(term, coords[i])
        for k, poly in enumerate(term):
            for e, v in poly.items():
                nv = F.add(total[k].get(e, 0), F.mul(c, v))
                if nv:
                    total[k][e] = nv
                else:
                    total[k].pop(e, None)
    eqs = [t for t in total if t]
    for idx in range(n):
        if idx not in fixed:
            e = [0] * n
            e[idx] = F.q
            eqs.append({tuple(e): 1, var(idx): F.neg(1)})
    return eqs


def groebner_recovery(S: Surface, m: int, fixed: dict | None = None, max_pairs: int = 5000) -> GroebnerAttackResult:
    """Run Buchberger on the coefficient system and report its cost."""
    eqs = coefficient_system(S, m, fixed)
    n = 4 * (m + 1)
    t0 = time.perf_counter()
    try:
        basis = buchberger(S.field, eqs, "grevlex", max_pairs)
    except GroebnerBudgetExceeded:
        return GroebnerAttackResult("budget_exceeded", n, len(eqs), 0, time.perf_counter() - t0)
    return GroebnerAttackResult(
        "solved", n, len(eqs), len(basis), time.perf_counter() - t0, is_zero_dimensional(basis, n)
    )
