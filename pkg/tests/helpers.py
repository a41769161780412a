"""Independent oracles shared by the test modules."""

import itertools
import random

from surfcommit.algebra.field import field_extend


def polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def synthetic_weil(q: int, b2: int, rng: random.Random):
    """Random monic integer polynomial of degree b2 with all roots of modulus q.

    Built from factors T - q, T + q and T^2 - aT + q^2 with |a| < 2q.
    Returns (ascending coefficients, functional-equation sign, q-multiplicity).
    """
    coeffs, sign, mult = [1], 1, 0
    remaining = b2
    while remaining:
        kind = rng.choice(["plus", "minus", "pair", "pair"] if remaining >= 2 else ["plus", "minus"])
        if kind == "plus":
            coeffs = polymul(coeffs, [-q, 1])
            mult += 1
            remaining -= 1
        elif kind == "minus":
            coeffs = polymul(coeffs, [q, 1])
            sign = -sign
            remaining -= 1
        else:
            a = rng.randrange(-2 * q + 1, 2 * q)
            coeffs = polymul(coeffs, [q * q, -a, 1])
            remaining -= 2
    return coeffs, sign, mult


def cone_count(S, i: int) -> int:
    """Projective points of S over F_{q^i}: affine-cone zeros divided by Q - 1."""
    E, emb = field_extend(S.field, i)
    G = S.F.embed(emb)
    zeros = sum(1 for v in itertools.product(range(E.q), repeat=4) if any(v) and G.evaluate(v) == 0)
    assert zeros % (E.q - 1) == 0
    return zeros // (E.q - 1)


def det3(M):
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def gram_det(d: int, m: int, delta: int) -> int:
    A = -(2 + (d - 4) * m)
    return det3([[d, m, m], [m, A, delta], [m, delta, A]])
