"""Integer-coefficient polynomial and power-series helpers.

Polynomials are plain Python lists ``[a0, a1, ...]`` (index = degree) with the
convention that trailing zeros are trimmed and ``[]`` is the zero polynomial.
All modular routines keep coefficients reduced into ``[0, mod)``.

Power series of large degree (needed for curve logarithms up to degree
several thousand) are multiplied through Kronecker substitution: coefficient
lists are packed into one big integer with a fixed limb width, multiplied with
CPython's native big-int arithmetic, and unpacked.  That keeps the series
layer pure Python while staying far below the acceptance-suite time budgets.
"""

from __future__ import annotations

import random


def trim(a: list) -> list:
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def padd(a, b, mod):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % mod
    return trim([c % mod for c in out])


def psub(a, b, mod):
    return padd(a, [(-c) % mod for c in b], mod)


def pmul(a, b, mod):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c == 0:
            continue
        for j, d in enumerate(b):
            out[i + j] = (out[i + j] + c * d) % mod
    return trim(out)


def pdivmod_monic(a, b, mod):
    """Divide by a monic polynomial ``b``; returns (quotient, remainder)."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    assert b[-1] % mod == 1, "divisor must be monic"
    a = [c % mod for c in a]
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    r = list(a)
    for i in range(len(a) - db - 1, -1, -1):
        c = r[i + db] % mod
        if c:
            q[i] = c
            for j, d in enumerate(b):
                r[i + j] = (r[i + j] - c * d) % mod
    return trim(q), trim(r)


def peval(a, x, mod):
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % mod
    return acc


def fp_monic(a, p):
    a = trim([c % p for c in a])
    if not a:
        return a
    inv = pow(a[-1], p - 2, p)
    return [(c * inv) % p for c in a]


def fp_gcd(a, b, p):
    a, b = trim([c % p for c in a]), trim([c % p for c in b])
    while b:
        _, r = pdivmod_monic(a, fp_monic(b, p), p)
        a, b = b, trim(r)
    return fp_monic(a, p)


def fp_ext_bezout(a, b, p):
    """Return (s, t) with ``s*a + t*b = 1`` over GF(p); requires coprimality."""
    r0, r1 = trim([c % p for c in a]), trim([c % p for c in b])
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        lead = pow(r1[-1], p - 2, p)
        q, r = pdivmod_monic(r0, [(c * lead) % p for c in r1], p)
        q = [(c * lead) % p for c in q]
        r0, r1 = r1, trim(r)
        s0, s1 = s1, psub(s0, pmul(q, s1, p), p)
        t0, t1 = t1, psub(t0, pmul(q, t1, p), p)
    if len(r0) != 1:
        raise ValueError("polynomials are not coprime mod p")
    inv = pow(r0[0], p - 2, p)
    return [(c * inv) % p for c in s0], [(c * inv) % p for c in t0]


def fp_powmod(base, e, modpoly, p):
    result = [1]
    base = pdivmod_monic(base, modpoly, p)[1]
    while e:
        if e & 1:
            result = pdivmod_monic(pmul(result, base, p), modpoly, p)[1]
        base = pdivmod_monic(pmul(base, base, p), modpoly, p)[1]
        e >>= 1
    return result


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def multiplicative_order(a: int, n: int) -> int:
    """Order of ``a`` in (Z/n)^*; n = 1 gives order 1."""
    if n == 1:
        return 1
    if pow(a % n, 1, n) == 0 or gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    k, x = 1, a % n
    while x != 1:
        x = (x * a) % n
        k += 1
    return k


def gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def cyclotomic_prime_power(l: int, m: int) -> list:
    """Coefficients of the (l^m)-th cyclotomic polynomial, l prime."""
    if m == 0:
        return [-1, 1]
    # x^(l^m) - 1 divided by x^(l^(m-1)) - 1: sum of x^(j*l^(m-1)), j < l
    step = l ** (m - 1)
    out = [0] * (step * (l - 1) + 1)
    for j in range(l):
        out[j * step] = 1 if j < l else 0
    for j in range(l - 1, -1, -1):
        out[j * step] = 1
    return trim(out)


def equal_degree_factor(poly, d: int, p: int, rng=None) -> list:
    """One monic irreducible degree-``d`` factor of a squarefree ``poly``
    over GF(p), all of whose irreducible factors have degree ``d``
    (Cantor-Zassenhaus splitting)."""
    rng = rng or random.Random(0xC2)
    poly = fp_monic(poly, p)
    if len(poly) - 1 == d:
        return poly
    while True:
        r = [rng.randrange(p) for _ in range(len(poly) - 1)]
        r = trim(r)
        if len(r) < 2:
            continue
        g = fp_gcd(poly, r, p)
        if 1 < len(g) < len(poly):
            cand = g
        else:
            h = fp_powmod(r, (p ** d - 1) // 2, poly, p)
            h = psub(h, [1], p)
            cand = fp_gcd(poly, h, p)
            if not (1 < len(cand) < len(poly)):
                continue
        if len(cand) - 1 == d:
            return fp_monic(cand, p)
        poly = cand if len(cand) - 1 >= d else trim(
            pdivmod_monic(poly, cand, p)[0])
        if len(poly) - 1 == d:
            return fp_monic(poly, p)


def hensel_lift_factor(f, g0, p: int, K: int) -> list:
    """Lift a monic factor ``g0`` of ``f`` from mod p to mod p^K.

    ``f`` must be monic with integer coefficients and ``f = g0*h0 mod p``
    with gcd(g0, h0) = 1 mod p.  Linear lifting, one digit per step, is
    plenty fast at the precisions used here.
    """
    g0 = fp_monic(g0, p)
    h0, rem = pdivmod_monic([c % p for c in f], g0, p)
    assert not trim(rem), "g0 does not divide f mod p"
    s, t = fp_ext_bezout(g0, h0, p)
    g = list(g0)
    h = list(h0)
    pk = p
    for _ in range(K - 1):
        mod_next = pk * p
        err = psub([c % mod_next for c in f], pmul(g, h, mod_next), mod_next)
        assert all(c % pk == 0 for c in err)
        e = [(c // pk) % p for c in err]
        # solve u*h + v*g = e mod p with deg u < deg g
        u = pdivmod_monic(pmul(t, e, p), g, p)[1]
        num = psub(e, pmul(u, h, p), p)
        v, r = pdivmod_monic(num, g, p)
        assert not trim(r)
        g = padd(g, [(c * pk) % mod_next for c in u], mod_next)
        h = padd(h, [(c * pk) % mod_next for c in v], mod_next)
        pk = mod_next
    return g


# ---------------------------------------------------------------------------
# Kronecker-substitution power series over Z/mod (dense int lists, index =
# degree).  ``n`` below is the truncation length: results keep degrees < n.
# ---------------------------------------------------------------------------

def _limb_bytes(mod: int, nterms: int) -> int:
    prodmax = (mod - 1) * (mod - 1) * max(nterms, 1)
    width = (prodmax.bit_length() + 7) // 8 + 1
    return max(width, 4)


def ser_mul(a: list, b: list, mod: int, n: int) -> list:
    """Truncated product of dense coefficient lists modulo ``mod``."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return []
    if min(len(a), len(b)) < 40:
        out = [0] * min(len(a) + len(b) - 1, n)
        for i, c in enumerate(a):
            if c == 0:
                continue
            top = min(len(b), n - i)
            for j in range(top):
                out[i + j] = (out[i + j] + c * b[j]) % mod
        return out
    w = _limb_bytes(mod, min(len(a), len(b)))
    abig = int.from_bytes(
        b"".join(int(c % mod).to_bytes(w, "little") for c in a), "little")
    bbig = int.from_bytes(
        b"".join(int(c % mod).to_bytes(w, "little") for c in b), "little")
    cbig = abig * bbig
    raw = cbig.to_bytes(w * (len(a) + len(b)) + w, "little")
    out = []
    for k in range(min(len(a) + len(b) - 1, n)):
        out.append(int.from_bytes(raw[k * w:(k + 1) * w], "little") % mod)
    return out


def ser_inv(a: list, mod: int, n: int) -> list:
    """Inverse of a series with unit constant term, to length ``n``."""
    c0 = a[0] % mod
    inv0 = modinv(c0, mod)
    x = [inv0]
    k = 1
    while k < n:
        k = min(2 * k, n)
        ax = ser_mul(a[:k], x, mod, k)
        two_minus = [(-c) % mod for c in ax]
        two_minus[0] = (two_minus[0] + 2) % mod
        x = ser_mul(x, two_minus, mod, k)
    return x[:n]


def modinv(a: int, mod: int) -> int:
    a %= mod
    g, x, _ = _ext_gcd(a, mod)
    if g != 1:
        raise ZeroDivisionError(f"{a} not invertible mod {mod}")
    return x % mod


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v
