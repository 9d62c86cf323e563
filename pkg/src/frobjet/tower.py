"""Exact arithmetic in ramified towers R = W[pi] with pi^(l^m) = p.

Representation
--------------
Fix an odd prime p, a prime l != p, a level m >= 0 and e := l^m.  Let zeta be
a primitive e-th root of unity and W = Z_p[zeta] the unramified ring it
generates; its degree f equals the multiplicative order of p mod e.  The
tower ring is

    R = W[pi] / (pi^e - p),

a free Z_p-module with basis  zeta^i * pi^j  (i < f, j < e).  An element is
stored as an f x e integer matrix of residues mod p^prec, where ``prec`` is
the absolute precision actually certified for that element.  The minimal
polynomial g of zeta is the Hensel lift mod p^K of an irreducible factor of
the e-th cyclotomic polynomial mod p; products of zeta-powers reduce through
precomputed tables.

Frobenius family
----------------
The automorphism tau fixes W and sends pi to zeta*pi; phi fixes pi and sends
zeta to zeta^p (the p-power map on residues).  The family used throughout is
phi^(gamma) := tau^gamma o phi, indexed by an integer gamma >= 0.  A word
mu = i_1...i_s over directions with exponents (gamma_1, ..., gamma_n) acts as

    phi_mu = tau^(gamma_{i_1} + p*gamma_{i_2} + ... + p^(s-1)*gamma_{i_s}) o phi^s,

which is what :func:`check_monomial_independence` exploits.

Precision accounting
--------------------
Binary operations certify min(prec_a, prec_b); division by pi or p costs one
digit.  Zero tests mean "congruent to 0 mod p^prec", never exact vanishing.
Elements are immutable; a built Tower is read-only, so everything can be
shared freely between threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import polyutils as pu
from .errors import (FamilyMismatch, NotAUnit, NotEisensteinCompatible,
                     PrecisionExhausted, PrecisionTooLow)

INF = math.inf


@dataclass(frozen=True)
class TowerConfig:
    """Parameters of a tower level: base prime, ramification and precision."""

    p: int
    l: int
    m: int
    f: int
    K: int

    @property
    def e(self) -> int:
        return self.l ** self.m


@dataclass(frozen=True)
class FrobeniusIndex:
    """Selects the automorphism tau^gamma o phi from the l-tower family."""

    gamma: int


class Tower:
    """Ring context for R = W[pi]/(pi^e - p) at fixed absolute precision."""

    def __init__(self, config: TowerConfig):
        p, l, m, f, K = config.p, config.l, config.m, config.f, config.K
        if not pu.is_prime(p) or p == 2:
            raise NotEisensteinCompatible(f"p = {p} must be an odd prime")
        if not pu.is_prime(l) or l == p:
            raise NotEisensteinCompatible(f"l = {l} must be a prime != p")
        if m < 0:
            raise NotEisensteinCompatible("tower level m must be >= 0")
        if K < 2:
            raise PrecisionTooLow("absolute precision K must be >= 2")
        e = l ** m
        if (p ** f - 1) % e != 0:
            raise NotEisensteinCompatible(
                f"l^m = {e} does not divide p^f - 1 = {p ** f - 1}")
        d = pu.multiplicative_order(p, e)
        if f != d:
            raise NotEisensteinCompatible(
                f"unramified degree f = {f} must equal ord(p mod l^m) = {d}")
        self.config = config
        self.p, self.e, self.f, self.K = p, e, f, K
        self.pK = p ** K
        self._build_zeta_tables()

    def _build_zeta_tables(self):
        p, e, f, K = self.p, self.e, self.f, self.K
        phi_lm = pu.cyclotomic_prime_power(self.config.l, self.config.m)
        if self.config.m == 0:
            g0 = [-1 % p, 1]
        else:
            g0 = pu.equal_degree_factor(phi_lm, f, p)
        # lift the factorization of x^e - 1 (not just of the cyclotomic
        # polynomial) so that zeta^e = 1 holds exactly mod p^K
        xe1 = [0] * (e + 1)
        xe1[0], xe1[e] = -1, 1
        self.g = pu.hensel_lift_factor(xe1, g0, p, K)
        assert len(self.g) - 1 == f
        # zpow[t] = column vector of zeta^t mod g, t in [0, e)
        one = [1] + [0] * (f - 1)
        zpow = [one]
        cur = one
        for _ in range(1, e):
            cur = self._mul_by_x(cur)
            zpow.append(cur)
        self.zpow = zpow
        nxt = self._mul_by_x(zpow[e - 1])
        assert nxt == one, "zeta^e != 1 after Hensel lifting"
        # reduction table for products: zred2[k] = zeta^k mod g, k <= 2f-2
        self.zred2 = [self._vec(k) for k in range(2 * f - 1)]

    def _mul_by_x(self, vec):
        f, pK = self.f, self.pK
        out = [0] * f
        carry = vec[f - 1]
        for i in range(f - 1, 0, -1):
            out[i] = vec[i - 1]
        if carry:
            for i in range(f):
                out[i] = (out[i] - carry * self.g[i]) % pK
        return [c % pK for c in out]

    def _vec(self, k):
        if k < self.f:
            v = [0] * self.f
            v[k] = 1
            return v
        v = [0] * self.f
        v[self.f - 1] = 1
        for _ in range(k - (self.f - 1)):
            v = self._mul_by_x(v)
        return v

    # -- element constructors ------------------------------------------------

    def zero(self, prec=None) -> "TowerElement":
        prec = self.K if prec is None else prec
        return TowerElement(self, [[0] * self.e for _ in range(self.f)], prec)

    def one(self, prec=None) -> "TowerElement":
        return self.from_int(1, prec)

    def from_int(self, n: int, prec=None) -> "TowerElement":
        prec = self.K if prec is None else prec
        c = [[0] * self.e for _ in range(self.f)]
        c[0][0] = n % (self.p ** prec)
        return TowerElement(self, c, prec)

    def pi(self, prec=None) -> "TowerElement":
        prec = self.K if prec is None else prec
        c = [[0] * self.e for _ in range(self.f)]
        if self.e == 1:
            c[0][0] = self.p % (self.p ** prec)
        else:
            c[0][1] = 1
        return TowerElement(self, c, prec)

    def zeta(self, prec=None) -> "TowerElement":
        prec = self.K if prec is None else prec
        c = [[0] * self.e for _ in range(self.f)]
        if self.f == 1:
            c[0][0] = self.zpow[1 % self.e][0] % (self.p ** prec)
        else:
            c[1][0] = 1
        return TowerElement(self, c, prec)

    def element(self, coeffs, prec=None) -> "TowerElement":
        prec = self.K if prec is None else prec
        pk = self.p ** prec
        c = [[coeffs[i][j] % pk for j in range(self.e)] for i in range(self.f)]
        return TowerElement(self, c, prec)

    def random_element(self, rng, prec=None) -> "TowerElement":
        prec = self.K if prec is None else prec
        pk = self.p ** prec
        return TowerElement(
            self,
            [[rng.randrange(pk) for _ in range(self.e)] for _ in range(self.f)],
            prec)

    def random_unit(self, rng, prec=None) -> "TowerElement":
        while True:
            a = self.random_element(rng, prec)
            if valuation(a) == 0:
                return a

    def element_from_dict(self, d) -> "TowerElement":
        return self.element(d["coeffs"], d["prec"])

    def teichmuller(self, a: "TowerElement") -> "TowerElement":
        """Teichmuller representative of the W-part residue of ``a``.

        Requires ``a`` to lie in W (zero pi-part); iterates x -> x^(p^f),
        gaining at least one certified digit per step.
        """
        if any(a.coeffs[i][j] % a.tower.p ** a.prec
               for i in range(self.f) for j in range(1, self.e)):
            raise ValueError("Teichmuller lift needs an element of W")
        x = a
        q = self.p ** self.f
        for _ in range(a.prec + 1):
            nxt = x ** q
            if nxt == x:
                return nxt
            x = nxt
        return x

    def __repr__(self):
        c = self.config
        return (f"Tower(p={c.p}, l={c.l}, m={c.m}, f={c.f}, K={c.K})")


def build_tower(config: TowerConfig) -> Tower:
    """Validate the configuration and construct the ring context."""
    return Tower(config)


class TowerElement:
    """Immutable element of a tower, coefficients reduced mod p^prec."""

    __slots__ = ("tower", "coeffs", "prec")

    def __init__(self, tower: Tower, coeffs, prec: int):
        if prec < 1:
            raise PrecisionExhausted("element precision dropped below 1")
        self.tower = tower
        self.prec = min(prec, tower.K)
        self.coeffs = tuple(tuple(row) for row in coeffs)

    # -- helpers ---------------------------------------------------------

    def _check(self, other):
        if self.tower is not other.tower:
            raise FamilyMismatch("elements from different towers")

    def at_precision(self, prec: int) -> "TowerElement":
        pk = self.tower.p ** min(prec, self.prec)
        return TowerElement(
            self.tower,
            [[c % pk for c in row] for row in self.coeffs],
            min(prec, self.prec))

    def is_zero(self) -> bool:
        """Congruent to 0 mod p^prec (never a claim of exact vanishing)."""
        return all(c == 0 for row in self.coeffs for c in row)

    def equals(self, other, precision: int | None = None) -> bool:
        """Agreement modulo p^precision (clipped to the shared precision)."""
        diff = self - other
        target = diff.prec if precision is None else min(precision, diff.prec)
        pk = self.tower.p ** target
        return all(c % pk == 0 for row in diff.coeffs for c in row)

    def __eq__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        self._check(other)
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("TowerElement equality is precision-relative")

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = self.tower.from_int(other, self.prec)
        self._check(other)
        prec = min(self.prec, other.prec)
        pk = self.tower.p ** prec
        c = [[(a + b) % pk for a, b in zip(ra, rb)]
             for ra, rb in zip(self.coeffs, other.coeffs)]
        return TowerElement(self.tower, c, prec)

    __radd__ = __add__

    def __neg__(self):
        pk = self.tower.p ** self.prec
        return TowerElement(
            self.tower, [[(-a) % pk for a in row] for row in self.coeffs],
            self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.tower.from_int(other, self.prec)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            pk = self.tower.p ** self.prec
            return TowerElement(
                self.tower,
                [[(other * a) % pk for a in row] for row in self.coeffs],
                self.prec)
        self._check(other)
        t = self.tower
        prec = min(self.prec, other.prec)
        pk = t.p ** prec
        f, e = t.f, t.e
        acc = [[0] * e for _ in range(2 * f - 1)]
        for j1 in range(e):
            cola = [self.coeffs[i][j1] for i in range(f)]
            if not any(cola):
                continue
            for j2 in range(e):
                colb = [other.coeffs[i][j2] for i in range(f)]
                if not any(colb):
                    continue
                jj = j1 + j2
                scale = t.p if jj >= e else 1
                jr = jj % e
                for i1 in range(f):
                    a = cola[i1]
                    if a == 0:
                        continue
                    a = a * scale
                    for i2 in range(f):
                        b = colb[i2]
                        if b:
                            acc[i1 + i2][jr] = (acc[i1 + i2][jr] + a * b) % pk
        out = [[0] * e for _ in range(f)]
        for k in range(2 * f - 1):
            rowk = acc[k]
            if not any(rowk):
                continue
            red = t.zred2[k]
            for i in range(f):
                ri = red[i]
                if ri:
                    for j in range(e):
                        if rowk[j]:
                            out[i][j] = (out[i][j] + ri * rowk[j]) % pk
        return TowerElement(t, out, prec)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.tower.one(self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "TowerElement":
        """Inverse of a unit, by residue inversion plus Newton lifting."""
        if valuation(self) != 0:
            raise NotAUnit("inverse requires valuation 0")
        t = self.tower
        p, f, e = t.p, t.f, t.e
        # invert mod p: W-part first, then the nilpotent pi-part
        w0 = [self.coeffs[i][0] % p for i in range(f)]
        s, _ = pu.fp_ext_bezout(pu.trim(w0), [c % p for c in t.g], p)
        inv_w = [[0] * e for _ in range(f)]
        for i, c in enumerate(s[:f]):
            inv_w[i][0] = c
        x = TowerElement(t, inv_w, 1)
        nilp = (self.at_precision(1) * x) - 1
        geo = t.one(1)
        term = t.one(1)
        for _ in range(e - 1):
            term = term * (-nilp)
            geo = geo + term
        x = x * geo
        # Newton: x <- x (2 - a x), doubling certified digits
        k = 1
        while k < self.prec:
            k = min(2 * k, self.prec)
            ax = self.at_precision(k) * TowerElement(t, x.coeffs, k)
            x = TowerElement(t, x.coeffs, k) * (2 - ax)
        return x.at_precision(self.prec)

    # -- pi / p division -----------------------------------------------------

    def divide_by_pi(self) -> "TowerElement":
        t = self.tower
        if t.e == 1:
            return self.divide_by_p()
        p, f, e = t.p, t.f, t.e
        if any(self.coeffs[i][0] % p for i in range(f)):
            raise PrecisionExhausted("element is not divisible by pi")
        prec = self.prec - 1
        if prec < 1:
            raise PrecisionExhausted("no certified digits left after pi-division")
        pk = p ** prec
        c = [[0] * e for _ in range(f)]
        for i in range(f):
            for j in range(1, e):
                c[i][j - 1] = self.coeffs[i][j] % pk
            c[i][e - 1] = (c[i][e - 1] + (self.coeffs[i][0] // p)) % pk
        return TowerElement(t, c, prec)

    def divide_by_p(self) -> "TowerElement":
        t = self.tower
        if any(c % t.p for row in self.coeffs for c in row):
            raise PrecisionExhausted("element is not divisible by p")
        prec = self.prec - 1
        if prec < 1:
            raise PrecisionExhausted("no certified digits left after p-division")
        pk = t.p ** prec
        c = [[(a // t.p) % pk for a in row] for row in self.coeffs]
        return TowerElement(t, c, prec)

    def to_dict(self):
        return {"coeffs": [list(r) for r in self.coeffs], "prec": self.prec}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)

    def __repr__(self):
        return f"TowerElement({self.to_dict()['coeffs']} @ prec {self.prec})"


# ---------------------------------------------------------------------------
# automorphisms
# ---------------------------------------------------------------------------

def apply_automorphism(a: TowerElement, tau_exp: int, frob_exp: int
                       ) -> TowerElement:
    """Apply tau^tau_exp o phi^frob_exp (phi first).

    On basis monomials: zeta^i pi^j -> zeta^(p^frob_exp * i + tau_exp * j) pi^j.
    No precision is lost.
    """
    t = a.tower
    e, f = t.e, t.f
    pk = t.p ** a.prec
    pb = pow(t.p, frob_exp, e) if e > 1 else 0
    out = [[0] * e for _ in range(f)]
    for i in range(f):
        for j in range(e):
            c = a.coeffs[i][j]
            if c == 0:
                continue
            zexp = (pb * i + tau_exp * j) % e if e > 1 else 0
            red = t.zpow[zexp]
            for k in range(f):
                if red[k]:
                    out[k][j] = (out[k][j] + c * red[k]) % pk
    return TowerElement(t, out, a.prec)


def frobenius_apply(tower: Tower, idx: FrobeniusIndex, a: TowerElement
                    ) -> TowerElement:
    """phi^(gamma) = tau^gamma o phi: zeta -> zeta^p, pi -> zeta^gamma pi."""
    if a.tower is not tower:
        raise FamilyMismatch("element does not belong to this tower")
    return apply_automorphism(a, idx.gamma % tower.e if tower.e > 1 else 0, 1)


def raise_if_bad_word(gammas, word):
    for i in word:
        if not 1 <= i <= len(gammas):
            raise FamilyMismatch(f"direction {i} outside the family")


def frobenius_word_apply(tower: Tower, gammas, word, a: TowerElement
                         ) -> TowerElement:
    """Apply phi_mu for a word mu = (i_1, ..., i_s) over the family."""
    c, s = word_exponents_for(tower.p, gammas, word)
    return apply_automorphism(a, c % tower.e if tower.e > 1 else 0, s)


def word_exponents_for(p: int, gammas, word) -> tuple:
    """(tau-exponent, phi-exponent) of phi_{i_1} o ... o phi_{i_s}.

    The tau exponent c(mu) = gamma_{i_1} + p*gamma_{i_2} + ... is kept as an
    exact integer; reduction mod l^m happens only at application time.
    """
    raise_if_bad_word(gammas, word)
    c = 0
    pk = 1
    for i in word:
        c += gammas[i - 1] * pk
        pk *= p
    return c, len(word)


def pi_derivation(tower: Tower, idx: FrobeniusIndex, a: TowerElement
                  ) -> TowerElement:
    """delta a = (phi^(gamma)(a) - a^p) / pi, certified one digit lower."""
    b = frobenius_apply(tower, idx, a) - a ** tower.p
    return b.divide_by_pi()


def valuation(a: TowerElement):
    """v_p(a) in (1/e)Z, or +inf when a = 0 mod p^prec.

    The basis zeta^i pi^j is orthonormal: the valuation is the minimum of
    v_p(coefficient) + j/e over nonzero entries.
    """
    t = a.tower
    best = None
    for i in range(t.f):
        for j in range(t.e):
            c = a.coeffs[i][j]
            if c == 0:
                continue
            v = Fraction(pu.vp(c, t.p)) + Fraction(j, t.e)
            if best is None or v < best:
                best = v
    return INF if best is None else best


def n_of_pi(tower: Tower) -> int:
    """Smallest integer N with v_p(pi^n / n) >= -N for all n >= 1."""
    return n_of_pi_from(tower.p, tower.e)


def n_of_pi_from(p: int, e: int) -> int:
    best = None
    k = 0
    while True:
        # ceil(k - p^k/e) = -floor((p^k - k*e)/e), no floats involved
        val = -((p ** k - k * e) // e)
        if best is None or val > best:
            best = val
        # p^k/e - k is eventually strictly increasing; stop once safely past
        if p ** k > e * (k + 2) and k >= 2:
            break
        k += 1
    return best


def check_monomial_independence(tower: Tower, gammas, r: int):
    """Whether all words of length <= r act pairwise differently.

    A word mu acts as tau^(c(mu)) o phi^(|mu|) with the exact integer
    exponent c(mu) = sum_j p^(j-1) gamma_{i_j}; two words act identically on
    the full l-tower (through pi and the Teichmuller generator zeta of W)
    iff their (length, c) pairs agree.  Returns (independent, witness) where
    witness maps each word to its exponent pair.
    """
    if len(set(gammas)) != len(gammas):
        return False, {"duplicate_gammas": list(gammas)}
    n = len(gammas)
    witness = {}
    seen = {}
    ok = True
    for word in _all_words(n, r):
        c, s = word_exponents_for(tower.p, gammas, word)
        key = (s, c)
        witness["".join(map(str, word))] = {"length": s, "tau_exponent": c}
        if key in seen and seen[key] != word:
            ok = False
        seen.setdefault(key, word)
    return ok, witness


def _all_words(n, r):
    from itertools import product
    yield ()
    for s in range(1, r + 1):
        for word in product(range(1, n + 1), repeat=s):
            yield word


# ---------------------------------------------------------------------------
# elements of the fraction field with explicit p-power denominators
# ---------------------------------------------------------------------------

class QElement:
    """num / p^den with num a TowerElement: keeps congruence tests exact."""

    __slots__ = ("num", "den")

    def __init__(self, num: TowerElement, den: int = 0):
        self.num = num
        self.den = den

    @property
    def tower(self):
        return self.num.tower

    def valuation(self):
        v = valuation(self.num)
        return v if v == INF else v - self.den

    def certified_precision(self) -> int:
        return self.num.prec - self.den

    def __add__(self, other):
        if isinstance(other, TowerElement):
            other = QElement(other, 0)
        d = max(self.den, other.den)
        p = self.tower.p
        return QElement(self.num * p ** (d - self.den)
                        + other.num * p ** (d - other.den), d)

    def __neg__(self):
        return QElement(-self.num, self.den)

    def __sub__(self, other):
        if isinstance(other, TowerElement):
            other = QElement(other, 0)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, TowerElement):
            other = QElement(other, 0)
        if isinstance(other, int):
            return QElement(self.num * other, self.den)
        return QElement(self.num * other.num, self.den + other.den)

    __rmul__ = __mul__

    def normalized(self) -> "QElement":
        """Cancel p-powers shared by the numerator and the denominator."""
        q = self
        while q.den > 0:
            try:
                q = QElement(q.num.divide_by_p(), q.den - 1)
            except PrecisionExhausted:
                break
        return q

    def is_integral(self) -> bool:
        v = self.valuation()
        return v == INF or v >= 0

    def equals(self, other, precision: int | None = None) -> bool:
        """Agreement at the stated (or best shared) absolute precision."""
        diff = self - other
        v = diff.valuation()
        cert = diff.certified_precision()
        target = cert if precision is None else min(precision, cert)
        return v == INF or v >= target

    def to_dict(self):
        return {"num": self.num.to_dict(), "den": self.den}

    def __repr__(self):
        return f"QElement({self.num!r} / p^{self.den})"
