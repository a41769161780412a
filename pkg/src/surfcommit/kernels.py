"""Exhaustive enumeration of P^3(F_Q) in vectorised chunks.

Points are taken in normalised form (first nonzero coordinate equal to 1), in
the order (1,a,b,c), (0,1,b,c), (0,0,1,c), (0,0,0,1) with a, b, c running
through the int encodings of F_Q.  Work splits into independent chunks that
can be farmed out to worker processes; results merge order-independently.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor

import numpy as np

from surfcommit.algebra.field import Field
from surfcommit.algebra.mpoly import HomogPoly

CHUNK_ELEMENTS = 2**20


def projective_size(Q: int) -> int:
    return Q**3 + Q**2 + Q + 1


def plan_chunks(Q: int) -> list[tuple[int, int, int]]:
    """Split P^3(F_Q) into (chart, lo, hi) ranges over the leading free coordinate."""
    per = max(1, CHUNK_ELEMENTS // (Q * Q))
    tasks = [(0, lo, min(Q, lo + per)) for lo in range(0, Q, per)]
    tasks.append((1, 0, Q))
    tasks.append((2, 0, 1))
    tasks.append((3, 0, 1))
    return tasks


def chunk_points(Q: int, chart: int, lo: int, hi: int) -> list[np.ndarray]:
    """The four coordinate arrays of the points in one chunk."""
    if chart == 0:
        a, b, c = np.meshgrid(np.arange(lo, hi), np.arange(Q), np.arange(Q), indexing="ij")
        a, b, c = a.ravel(), b.ravel(), c.ravel()
        return [np.ones_like(a), a, b, c]
    if chart == 1:
        b, c = np.meshgrid(np.arange(Q), np.arange(Q), indexing="ij")
        b, c = b.ravel(), c.ravel()
        return [np.zeros_like(b), np.ones_like(b), b, c]
    if chart == 2:
        c = np.arange(Q)
        return [np.zeros_like(c), np.zeros_like(c), np.ones_like(c), c]
    one = np.ones(1, dtype=np.int64)
    return [0 * one, 0 * one, 0 * one, one]


def _forms_payload(forms):
    return [(f.degree, dict(f.terms)) for f in forms]


def _forms_from_payload(field, payload):
    out = []
    for degree, terms in payload:
        h = HomogPoly.__new__(HomogPoly)
        h.field = field
        h.degree = degree
        h.terms = terms
        out.append(h)
    return out


def _zero_mask(field: Field, forms, pts) -> np.ndarray:
    mask = None
    for f in forms:
        vals = f.evaluate_arrays(pts, field)
        z = vals == 0
        mask = z if mask is None else (mask & z)
        if not mask.any():
            break
    return mask


def _count_task(args):
    field, payload, (chart, lo, hi) = args
    forms = _forms_from_payload(field, payload)
    pts = chunk_points(field.q, chart, lo, hi)
    return int(np.count_nonzero(_zero_mask(field, forms, pts)))


def _zeros_task(args):
    field, payload, (chart, lo, hi) = args
    forms = _forms_from_payload(field, payload)
    pts = chunk_points(field.q, chart, lo, hi)
    mask = _zero_mask(field, forms, pts)
    idx = np.flatnonzero(mask)
    return [tuple(int(x[i]) for x in pts) for i in idx]


def _run(fn, tasks, workers: int):
    if workers <= 1 or len(tasks) == 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


def count_common_zeros(field: Field, forms, workers: int = 1) -> int:
    """Number of points of P^3(field) where every form vanishes."""
    payload = _forms_payload(forms)
    tasks = [(field, payload, c) for c in plan_chunks(field.q)]
    return sum(_run(_count_task, tasks, workers))


def common_zeros(field: Field, forms, workers: int = 1) -> list[tuple[int, int, int, int]]:
    """All normalised points of P^3(field) where every form vanishes, in scan order."""
    payload = _forms_payload(forms)
    tasks = [(field, payload, c) for c in plan_chunks(field.q)]
    out: list = []
    for part in _run(_zeros_task, tasks, workers):
        out.extend(part)
    return out


def normalise(field: Field, point) -> tuple[int, ...]:
    """Scale a nonzero vector so its first nonzero coordinate is 1."""
    for x in point:
        if x:
            inv = field.inv(x)
            return tuple(field.mul(inv, y) for y in point)
    raise ValueError("zero vector has no projective normalisation")
