"""Dense univariate polynomial arithmetic over a prime field.

Polynomials are trimmed ascending coefficient tuples of canonical ints;
``()`` is the zero polynomial.  These carry the affine coordinate of the
projective line and the moduli of residue fields.
"""

from __future__ import annotations


def normalize(F, a):
    a = tuple(c % F.p for c in a)
    n = len(a)
    while n > 0 and a[n - 1] == 0:
        n -= 1
    return a[:n]


def degree(a) -> int:
    """Degree, with the zero polynomial at -1."""
    return len(a) - 1


def is_monic(F, a) -> bool:
    return len(a) > 0 and a[-1] == 1


def add(F, a, b):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % F.p
    return normalize(F, out)


def neg(F, a):
    return tuple((-c) % F.p for c in a)


def sub(F, a, b):
    return add(F, a, neg(F, b))


def scale(F, a, c):
    return normalize(F, tuple((x * c) % F.p for x in a))


def mul(F, a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % F.p
    return normalize(F, out)


def divmod_(F, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv_lead = F.inv(b[-1])
    for i in range(len(a) - len(b), -1, -1):
        c = (a[i + len(b) - 1] * inv_lead) % F.p
        if c == 0:
            continue
        q[i] = c
        for j, y in enumerate(b):
            a[i + j] = (a[i + j] - c * y) % F.p
    return normalize(F, q), normalize(F, a)


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def gcd(F, a, b):
    while b:
        a, b = b, mod(F, a, b)
    if a:
        a = scale(F, a, F.inv(a[-1]))
    return a


def xgcd(F, a, b):
    """(g, s, t) with s*a + t*b = g, g monic when nonzero."""
    r0, r1 = normalize(F, a), normalize(F, b)
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, q, s1))
        t0, t1 = t1, sub(F, t0, mul(F, q, t1))
    if r0:
        c = F.inv(r0[-1])
        r0, s0, t0 = scale(F, r0, c), scale(F, s0, c), scale(F, t0, c)
    return r0, s0, t0


def pow_mod(F, a, e, m):
    result = (1,)
    base = mod(F, a, m)
    while e > 0:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        base = mod(F, mul(F, base, base), m)
        e >>= 1
    return result


def eval_at(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % F.p
    return acc


def ord_at(F, a, pi):
    """Multiplicity of the irreducible pi in a; raises on a = 0."""
    if not a:
        raise ZeroDivisionError("valuation of the zero polynomial")
    v = 0
    while True:
        q, r = divmod_(F, a, pi)
        if r:
            return v
        a = q
        v += 1


def is_irreducible(F, a) -> bool:
    """Rabin irreducibility test (exact, fine at desk-scale degrees)."""
    d = degree(a)
    if d < 1:
        return False
    if d == 1:
        return True
    x = (0, 1)
    # x^(p^d) == x mod a
    t = x
    for _ in range(d):
        t = pow_mod(F, t, F.p, a)
    if t != mod(F, x, a):
        return False
    for q in _prime_divisors(d):
        t = x
        for _ in range(d // q):
            t = pow_mod(F, t, F.p, a)
        if degree(gcd(F, sub(F, t, x), a)) != 0:
            return False
    return True


def _prime_divisors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def monic_polys(F, deg):
    """All monic polynomials of exact degree deg, in lexicographic order."""
    if deg == 0:
        yield (1,)
        return
    total = F.p**deg
    for code in range(total):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % F.p)
            c //= F.p
        yield tuple(coeffs) + (1,)


def monic_irreducibles(F, max_deg):
    """All monic irreducibles of degree 1..max_deg, ascending degree."""
    for d in range(1, max_deg + 1):
        for a in monic_polys(F, d):
            if is_irreducible(F, a):
                yield a


def fmt(F, a, var="t") -> str:
    if not a:
        return "0"
    terms = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            head = "" if c == 1 else f"{c}*"
            exp = "" if i == 1 else f"^{i}"
            terms.append(f"{head}{var}{exp}")
    return " + ".join(terms)
