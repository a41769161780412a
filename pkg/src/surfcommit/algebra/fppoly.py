"""Dense polynomials over a prime field F_p.

A polynomial is a list of ints in [0, p), ascending degree, with no trailing
zeros; ``[]`` is the zero polynomial.  These helpers back the extension-field
moduli and the function-field experiments, where degrees can reach 10^5, so
large products go through Kronecker substitution on Python integers.
"""

from __future__ import annotations

import numpy as np

_KRONECKER_MIN = 64


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: list[int]) -> int:
    """Degree, with -1 for the zero polynomial (internal helper only)."""
    return len(a) - 1


def add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return trim(out)


def sub(a, b, p):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return trim(out)


def scale(a, c, p):
    c %= p
    if c == 0:
        return []
    return [(x * c) % p for x in a]


def _schoolbook(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim([c % p for c in out])


def _pack(a, width):
    arr = np.asarray(a, dtype="<u8").view(np.uint8).reshape(-1, 8)[:, :width]
    return int.from_bytes(arr.tobytes(), "little")


def _unpack(n, width, count):
    raw = n.to_bytes(count * width, "little")
    buf = np.zeros((count, 8), dtype=np.uint8)
    buf[:, :width] = np.frombuffer(raw, dtype=np.uint8).reshape(count, width)
    return buf.view("<u8").reshape(count)


def mul(a, b, p):
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_MIN:
        return _schoolbook(a, b, p)
    bound = min(len(a), len(b)) * (p - 1) ** 2
    width = (bound.bit_length() + 7) // 8
    if width > 8:
        return _schoolbook(a, b, p)
    count = len(a) + len(b) - 1
    prod = _pack(a, width) * _pack(b, width)
    coeffs = _unpack(prod, width, count) % np.uint64(p)
    return trim(coeffs.astype(np.int64).tolist())


def divmod_(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [], trim(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = (a[i + db] * inv) % p
        q[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] = (a[i + j] - c * y) % p
    return trim(q), trim(a[:db])


def mod(a, b, p):
    return divmod_(a, b, p)[1]


def monic(a, p):
    if not a:
        return []
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a, b, p):
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, mod(a, b, p)
    return monic(a, p)


def mulmod(a, b, m, p):
    return mod(mul(a, b, p), m, p)


def powmod(a, e, m, p):
    result = [1] if len(m) > 1 else []
    base = mod(a, m, p)
    while e:
        if e & 1:
            result = mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = mulmod(base, base, m, p)
    return result


def power(a, e, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = mul(result, base, p)
        e >>= 1
        if e:
            base = mul(base, base, p)
    return result


def derivative(a, p):
    return trim([(i * c) % p for i, c in enumerate(a)][1:])


def evaluate(a, x, p):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def frobenius_power(a, q):
    """a(t)^q for q a power of p, using c^q = c on F_p coefficients.

    Returned sparse as ``{degree: coeff}``.
    """
    return {i * q: c for i, c in enumerate(a) if c}


def is_irreducible(f, p):
    """Rabin-style test: no factor of degree <= deg f / 2."""
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    f = monic(f, p)
    if n <= 3:
        return all(evaluate(f, x, p) for x in range(p))
    x = [0, 1]
    h = x
    for _ in range(1, n // 2 + 1):
        h = powmod(h, p, f, p)
        if len(gcd(f, sub(h, x, p), p)) > 1:
            return False
    return True


def lowest_irreducible(p, k):
    """Smallest monic irreducible of degree k, ordering lower coefficients as
    the base-p integer with the x^(k-1) coefficient most significant."""
    if k == 1:
        return [0, 1]
    for n in range(p**k):
        lower = [(n // p**i) % p for i in range(k)]
        if lower[0] == 0:
            continue
        f = lower + [1]
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")


def radical(f, p):
    """Product of the distinct monic irreducible factors of f."""
    f = monic(trim(list(f)), p)
    if len(f) <= 1:
        return [1]
    df = derivative(f, p)
    if not df:
        # f = g(t^p) = h(t)^p since coefficients are in F_p.
        return radical(f[::p], p)
    g = gcd(f, df, p)
    squarefree_part = divmod_(f, g, p)[0]
    if len(g) <= 1:
        return monic(squarefree_part, p)
    rest = radical(g, p)
    common = gcd(squarefree_part, rest, p)
    return monic(mul(squarefree_part, divmod_(rest, common, p)[0], p), p)
