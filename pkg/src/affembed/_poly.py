"""Dense univariate polynomial kernels over an abstract field.

Polynomials are plain lists of raw field representations, lowest degree
first, with no trailing zeros.  Every function takes the coefficient field
``F`` as first argument; ``F`` must provide ``zero``, ``one``, ``add``,
``sub``, ``neg``, ``mul``, ``inv`` and ``is_zero``.
"""


def trim(F, p):
    p = list(p)
    while p and F.is_zero(p[-1]):
        p.pop()
    return p


def degree(p):
    return len(p) - 1


def add(F, p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] = F.add(out[i], c)
    return trim(F, out)


def neg(F, p):
    return [F.neg(c) for c in p]


def sub(F, p, q):
    return add(F, p, neg(F, q))


def scale(F, p, c):
    if F.is_zero(c):
        return []
    return trim(F, [F.mul(c, a) for a in p])


def mul(F, p, q):
    if not p or not q:
        return []
    out = [F.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if F.is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return trim(F, out)


def shift(F, p, k):
    """Multiply by x**k."""
    if not p:
        return []
    return [F.zero()] * k + list(p)


def power(F, p, n):
    result = [F.one()]
    base = p
    while n:
        if n & 1:
            result = mul(F, result, base)
        n >>= 1
        if n:
            base = mul(F, base, base)
    return result


def divmod_(F, p, q):
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    p = list(p)
    dq = len(q) - 1
    lc_inv = F.inv(q[-1])
    if len(p) <= dq:
        return [], trim(F, p)
    quo = [F.zero()] * (len(p) - dq)
    for i in range(len(p) - 1, dq - 1, -1):
        c = p[i]
        if F.is_zero(c):
            continue
        c = F.mul(c, lc_inv)
        quo[i - dq] = c
        for j in range(dq + 1):
            p[i - dq + j] = F.sub(p[i - dq + j], F.mul(c, q[j]))
    return trim(F, quo), trim(F, p[:dq])


def rem(F, p, q):
    return divmod_(F, p, q)[1]


def monic(F, p):
    if not p:
        return []
    return scale(F, p, F.inv(p[-1]))


def gcd(F, p, q):
    while q:
        p, q = q, rem(F, p, q)
    return monic(F, p)


def xgcd(F, p, q):
    """Return (g, s, t) with s*p + t*q = g, g monic."""
    r0, r1 = p, q
    s0, s1 = [F.one()], []
    t0, t1 = [], [F.one()]
    while r1:
        quo, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, quo, s1))
        t0, t1 = t1, sub(F, t0, mul(F, quo, t1))
    if not r0:
        return [], [], []
    inv = F.inv(r0[-1])
    return scale(F, r0, inv), scale(F, s0, inv), scale(F, t0, inv)


def deriv(F, p):
    out = []
    for i in range(1, len(p)):
        out.append(F.mul(F.from_int(i), p[i]))
    return trim(F, out)


def evaluate(F, p, x):
    acc = F.zero()
    for c in reversed(p):
        acc = F.add(F.mul(acc, x), c)
    return acc


def compose(F, p, q):
    """Return p(q(x))."""
    acc = []
    for c in reversed(p):
        acc = add(F, mul(F, acc, q), [c] if not F.is_zero(c) else [])
    return acc
