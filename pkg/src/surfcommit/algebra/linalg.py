"""Gaussian elimination over finite fields.

Matrices are 2-D int64 arrays of field ints.  Prime fields with small p take
a lazy-reduction path: the working block is only reduced mod p in the pivot
column and pivot row, which is safe while accumulated magnitudes stay below
2^63.
"""

from __future__ import annotations

import numpy as np

from surfcommit.algebra.field import Field

_LAZY_PRIME = 2**20


def rref(field: Field, matrix) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Pivots are chosen as the first row (from the current rank down) with a
    nonzero entry in the column.
    """
    M = field.asarray(matrix).copy()
    if M.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if field.k == 1 and field.p < _LAZY_PRIME and M.dtype == np.int64:
        return _rref_prime(field.p, M)
    return _rref_generic(field, M)


def _rref_prime(p: int, M: np.ndarray):
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    # each update adds at most (p-1)^2 in magnitude; renormalise before overflow
    budget = max(1, (2**62) // max(1, (p - 1) ** 2) - p)
    steps = 0
    for c in range(cols):
        if r == rows:
            break
        col = M[r:, c] % p
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        row = M[r, c:] % p
        row = (row * pow(int(row[0]), -1, p)) % p
        M[r, c:] = row
        factors = M[:, c] % p
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            M[hit, c:] -= np.outer(factors[hit], row)
            M[hit, c] = 0
        pivots.append(c)
        r += 1
        steps += 1
        if steps >= budget:
            M %= p
            steps = 0
    M %= p
    return M, pivots


def _rref_generic(field: Field, M: np.ndarray):
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        inv = field.inv(int(M[r, c]))
        M[r, c:] = field.vmul(M[r, c:], inv)
        factors = M[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            update = field.vmul(factors[hit][:, None], M[r, c:][None, :])
            M[np.ix_(hit, np.arange(c, cols))] = field.vsub(M[hit, c:], update)
        pivots.append(c)
        r += 1
    return M, pivots


def rank(field: Field, matrix) -> int:
    return len(rref(field, matrix)[1])


def nullspace(field: Field, matrix) -> np.ndarray:
    """Basis of {v : M v = 0}, one basis vector per row.

    The basis is canonical: one vector per free column, with a 1 in that
    column and zeros in the other free columns.
    """
    M = field.asarray(matrix)
    cols = M.shape[1]
    R, pivots = rref(field, M)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((len(free), cols), dtype=M.dtype)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            v = int(R[r, f])
            if v:
                basis[i, pc] = field.neg(v)
    return basis


def matvec(field: Field, matrix, vector) -> np.ndarray:
    M = field.asarray(matrix)
    v = field.asarray(vector)
    if field.k == 1 and M.dtype == np.int64 and field.p < 2**31:
        out = np.zeros(M.shape[0], dtype=np.int64)
        for j in range(M.shape[1]):
            out = (out + M[:, j] * v[j]) % field.p
        return out
    out = np.zeros(M.shape[0], dtype=M.dtype)
    for j in range(M.shape[1]):
        out = field.vadd(out, field.vmul(M[:, j], v[j]))
    return out
