"""Truncated partial jet algebras over a tower.

The ring adjoins to the tower one etale coordinate T together with one
variable delta_mu T per nonempty word mu of length <= r over n directions,
D(n, r) variables in total.  Elements are sparse polynomials: a map from
monomials (tuples of (variable index, exponent), sorted) to tower-element
numerators, plus one global p-power denominator exponent.  Monomials of
total degree above the configured bound D are discarded by every operation,
so results are exact only for output monomials of degree <= D; operations
state this contract rather than hiding it.

The prolongation endomorphism for direction i acts on coefficients through
the tower Frobenius phi^(gamma_i), on T by T -> T^p + pi * delta_i T and on
delta_mu T by delta_mu T -> (delta_mu T)^p + pi * delta_(i mu) T; the
derivation is recovered as delta_i = (phi_i - (.)^p) / pi, which makes the
non-additive derivation axioms hold by construction.

Because phi images of single variables are two-term sums, powers expand by
plain binomials whose terms carry growing pi-powers; coefficients falling
below the working precision are pruned immediately, which is what keeps
high-degree expansions small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (FamilyMismatch, NotTopologicallyNilpotent, OrderOverflow,
                     PrecisionExhausted)
from .tower import (FrobeniusIndex, QElement, Tower, TowerElement,
                    frobenius_apply, pi_derivation, valuation)
from .words import words_up_to, word_to_string


@dataclass(frozen=True)
class JetRingConfig:
    """Shape of a truncated jet ring: directions, order, degree bound."""

    tower: Tower
    n: int
    r: int
    D: int
    gammas: tuple

    def __post_init__(self):
        if len(self.gammas) != self.n:
            raise FamilyMismatch("need one Frobenius index per direction")
        object.__setattr__(self, "gammas", tuple(self.gammas))

    @property
    def words(self):
        return words_up_to(self.n, self.r)

    def variable_names(self):
        return ["T"] + ["d" + word_to_string(w)
                        for w in words_up_to(self.n, self.r)[1:]]


class JetRing:
    """Context caching the variable table of a JetRingConfig."""

    def __init__(self, cfg: JetRingConfig):
        self.cfg = cfg
        self.tower = cfg.tower
        nonempty = words_up_to(cfg.n, cfg.r)[1:]
        self.var_words = [None] + nonempty          # index 0 is T
        self.word_to_var = {w: i + 1 for i, w in enumerate(nonempty)}
        self.nvars = 1 + len(nonempty)
        self._pi_pows = [self.tower.one(), self.tower.pi()]

    def pi_pow(self, j: int) -> TowerElement:
        while len(self._pi_pows) <= j:
            self._pi_pows.append(self._pi_pows[-1] * self._pi_pows[1])
        return self._pi_pows[j]

    def zero(self) -> "JetElement":
        return JetElement(self, {}, 0)

    def one(self) -> "JetElement":
        return JetElement(self, {(): self.tower.one()}, 0)

    def scalar(self, a: TowerElement, den: int = 0) -> "JetElement":
        return JetElement(self, {(): a}, den)

    def variable(self, idx: int, prec=None) -> "JetElement":
        return JetElement(
            self, {((idx, 1),): self.tower.one(prec)}, 0)

    def T(self, prec=None) -> "JetElement":
        return self.variable(0, prec)

    def delta_var(self, word, prec=None) -> "JetElement":
        if tuple(word) not in self.word_to_var:
            raise OrderOverflow(f"word {word} exceeds configured order")
        return self.variable(self.word_to_var[tuple(word)], prec)


class JetElement:
    """Sparse truncated polynomial num / p^den over the jet ring."""

    __slots__ = ("ring", "terms", "den")

    def __init__(self, ring: JetRing, terms, den: int = 0):
        self.ring = ring
        self.den = den
        D = ring.cfg.D
        clean = {}
        for mono, coeff in terms.items():
            if sum(e for _, e in mono) > D:
                continue
            if not coeff.is_zero():
                clean[mono] = coeff
        self.terms = clean

    # -- ring structure ----------------------------------------------------

    def _align(self, other):
        if self.ring is not other.ring:
            raise FamilyMismatch("jet elements from different rings")
        d = max(self.den, other.den)
        p = self.ring.tower.p
        a = self if self.den == d else self.scale_int(p ** (d - self.den))
        b = other if other.den == d else other.scale_int(p ** (d - other.den))
        return a, b, d

    def scale_int(self, c: int) -> "JetElement":
        return JetElement(self.ring,
                          {m: coeff * c for m, coeff in self.terms.items()},
                          self.den)

    def scale(self, a: TowerElement, den: int = 0) -> "JetElement":
        return JetElement(self.ring,
                          {m: coeff * a for m, coeff in self.terms.items()},
                          self.den + den)

    def __add__(self, other):
        a, b, d = self._align(other)
        t = dict(a.terms)
        for m, c in b.terms.items():
            t[m] = t[m] + c if m in t else c
        return JetElement(self.ring, t, d)

    def __neg__(self):
        return JetElement(self.ring,
                          {m: -c for m, c in self.terms.items()}, self.den)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale_int(other)
        if isinstance(other, TowerElement):
            return self.scale(other)
        if self.ring is not other.ring:
            raise FamilyMismatch("jet elements from different rings")
        D = self.ring.cfg.D
        out = {}
        small, big = ((self, other) if len(self.terms) <= len(other.terms)
                      else (other, self))
        for m1, c1 in small.terms.items():
            d1 = sum(e for _, e in m1)
            for m2, c2 in big.terms.items():
                if d1 + sum(e for _, e in m2) > D:
                    continue
                m = _mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return JetElement(self.ring, out, self.den + other.den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def truncate(self, D: int) -> "JetElement":
        """Restriction to monomials of total degree <= D (<= configured D)."""
        return JetElement(
            self.ring,
            {m: c for m, c in self.terms.items()
             if sum(e for _, e in m) <= D},
            self.den)

    def coefficient(self, mono) -> TowerElement:
        return self.terms.get(tuple(sorted(mono)), self.ring.tower.zero())

    def min_precision(self) -> int:
        return min((c.prec for c in self.terms.values()),
                   default=self.ring.tower.K)

    def integrality_report(self):
        """Per-monomial check that the true coefficient num/p^den is integral."""
        p = self.ring.tower.p
        report = {}
        for m, c in sorted(self.terms.items()):
            ok = all(x % p ** min(self.den, c.prec) == 0
                     for row in c.coeffs for x in row)
            report[_mono_str(self.ring, m)] = ok
        return report

    def to_dict(self):
        return {
            "den": self.den,
            "terms": [
                {"mono": [[v, e] for v, e in m], "coeff": c.to_dict()}
                for m, c in sorted(self.terms.items())],
        }

    def __repr__(self):
        parts = [f"{_mono_str(self.ring, m)}" for m in sorted(self.terms)]
        return f"JetElement(den={self.den}, monomials={parts[:8]}...)"


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_str(ring, m):
    if not m:
        return "1"
    names = ring.cfg.variable_names()
    return "*".join(f"{names[v]}^{e}" if e > 1 else names[v] for v, e in m)


def phi_endomorphism(ring: JetRing, i: int, F: JetElement) -> JetElement:
    """Prolongation endomorphism for direction i (1-based).

    Raises OrderOverflow when F involves a word of length r already, since
    the image would need length r + 1.
    """
    cfg = ring.cfg
    if not 1 <= i <= cfg.n:
        raise FamilyMismatch(f"direction {i} outside the family")
    tower = ring.tower
    p = tower.p
    idx = FrobeniusIndex(cfg.gammas[i - 1])
    out = ring.zero()
    var_images = {}

    def image_terms(v: int, e: int):
        # [(tower scalar, mono)] for (image of variable v)^e
        if (v, e) in var_images:
            return var_images[(v, e)]
        if v == 0:
            succ = ring.word_to_var.get((i,))
            if succ is None:
                raise OrderOverflow("order-0 ring cannot hold delta variables")
        else:
            w = ring.var_words[v]
            iw = (i,) + w
            succ = ring.word_to_var.get(iw)
            if succ is None:
                raise OrderOverflow(
                    f"word {iw} exceeds the configured order r = {cfg.r}")
        terms = []
        for j in range(e + 1):
            scalar = tower.from_int(math.comb(e, j)) * ring.pi_pow(j)
            if scalar.is_zero():
                continue
            mono = []
            if e - j:
                mono.append((v, p * (e - j)))
            if j:
                mono.append((succ, j))
            terms.append((scalar, tuple(sorted(mono))))
        var_images[(v, e)] = terms
        return terms

    acc_total = {}
    D = cfg.D
    for mono, coeff in F.terms.items():
        acc = {(): frobenius_apply(tower, idx, coeff)}
        for v, e in mono:
            imgs = image_terms(v, e)
            nxt = {}
            for m0, c0 in acc.items():
                deg0 = sum(x for _, x in m0)
                for scalar, m1 in imgs:
                    if deg0 + sum(x for _, x in m1) > D:
                        continue
                    c = c0 * scalar
                    if c.is_zero():
                        continue
                    m = _mono_mul(m0, m1)
                    nxt[m] = nxt[m] + c if m in nxt else c
            acc = nxt
            if not acc:
                break
        for m, c in acc.items():
            acc_total[m] = acc_total[m] + c if m in acc_total else c
    return JetElement(ring, acc_total, F.den)


def phi_word(ring: JetRing, word, F: JetElement) -> JetElement:
    """phi_mu = phi_{i_1} o ... o phi_{i_s}: innermost letter acts first."""
    for letter in reversed(tuple(word)):
        F = phi_endomorphism(ring, letter, F)
    return F


def delta_operator(ring: JetRing, i: int, F: JetElement) -> JetElement:
    """delta_i F = (phi_i F - F^p) / pi, certified one digit lower."""
    p = ring.tower.p
    G = phi_endomorphism(ring, i, F) - F ** p
    if G.den:
        # F had a denominator: F^p scaled it by p*den, realign first
        raise PrecisionExhausted(
            "delta of a non-integral jet element is not supported")
    terms = {}
    for m, c in G.terms.items():
        terms[m] = c.divide_by_pi()
    return JetElement(ring, terms, G.den)


def eval_jet(ring: JetRing, F: JetElement, a: TowerElement) -> QElement:
    """Evaluate F at the point T = a, delta_mu T = delta_mu(a).

    Requires v(a) > 0 so the discarded T-adic tail sits below precision;
    the value is certified modulo p^ceil((D+1) * v(a)) at most, on top of the
    coefficient precision.  See also :func:`eval_certificate`.
    """
    v = valuation(a)
    if not v > 0:
        raise NotTopologicallyNilpotent(
            "point evaluation requires positive valuation")
    cfg = ring.cfg
    values = {(): a}

    def delta_value(word):
        if word in values:
            return values[word]
        head, rest = word[0], word[1:]
        inner = delta_value(rest)
        val = pi_derivation(ring.tower, FrobeniusIndex(cfg.gammas[head - 1]),
                            inner)
        values[word] = val
        return val

    total = ring.tower.zero()
    for mono, coeff in F.terms.items():
        term = coeff
        for var, e in mono:
            base = a if var == 0 else delta_value(ring.var_words[var])
            term = term * base ** e
        total = total + term
    q = QElement(total, F.den)
    if q.certified_precision() < 1:
        raise PrecisionExhausted("evaluation consumed the precision budget")
    return q


def eval_certificate(ring: JetRing, a: TowerElement) -> int:
    """Absolute precision to which eval_jet values are certified for ``a``,
    accounting only for the T-adic truncation tail."""
    v = valuation(a)
    return math.floor((ring.cfg.D + 1) * v)
