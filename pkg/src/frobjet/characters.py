"""End-user character computations over a tower level.

This module packages the operations a verification run actually calls:

* the multiplicative-group character  x -> p^N log(phi_i(x) / x^p)  on units,
  an additive-in-products map whose symbol is p^(N+1) (phi_i - p);
* the term-by-term congruence check on logarithm coefficients driven by a
  scaled class triple (the order-(r,s) analogue of the classical
  Atkin--Swinnerton-Dyer integrality conditions);
* the antisymmetric bilinear pairing attached to a word pair, the kernel
  dimension of alpha -> <alpha, beta> over the finite tower level (a
  Q_p-linear map, decided by exact row reduction with valuation pivoting),
  and the two-route reciprocity equality;
* a one-variable Strassman zero-count bound over Z_p with a confirming
  brute-force root search.

All randomized callers are expected to pass seeded RNGs; everything here is
deterministic given its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import polyutils as pu
from .errors import (BetaTooLarge, DistinctWordsRequired, LogDivergence,
                     NotAUnit, SeriesTooShort, ZeroSeries)
from .formal import LogSeries
from .linalg import padic_nullspace
from .tower import (INF, FrobeniusIndex, QElement, Tower, TowerElement,
                    frobenius_apply, frobenius_word_apply, n_of_pi_from,
                    valuation)


def gm_character_eval(tower: Tower, idx: FrobeniusIndex, x: TowerElement
                      ) -> QElement:
    """psi_i(x) = p^N log(phi_i(x)/x^p) for a unit x; additive in products.

    The argument of the logarithm is 1 + pi * delta_i(x) / x^p, of positive
    valuation for any unit, so the series always converges; LogDivergence
    would indicate a corrupted input.
    """
    if valuation(x) != 0:
        raise NotAUnit("the multiplicative character is defined on units")
    p, e = tower.p, tower.e
    num = frobenius_apply(tower, idx, x) - x ** p
    z = num * (x ** p).inverse()
    vz = valuation(z)
    if vz != INF and not vz > 0:
        raise LogDivergence("log argument 1 + z needs v(z) > 0")
    prec = z.prec
    # sum until n/e - v_p(n) comfortably exceeds the certified precision
    nmax = e * (prec + 2) + 1
    dmax = 0
    nn = 1
    while nn <= nmax:
        dmax = max(dmax, pu.vp(nn, p) if nn % p == 0 else 0)
        nn += 1
    pk = p ** prec
    acc = tower.zero(prec)
    zn = tower.one(prec)
    for n in range(1, nmax + 1):
        zn = zn * z
        if zn.is_zero():
            break
        v = pu.vp(n, p) if n % p == 0 else 0
        unit = n // p ** v
        c = (pu.modinv(unit, pk) * p ** (dmax - v)) % pk
        if n % 2 == 0:
            c = -c
        acc = acc + zn * c
    out = QElement(acc, dmax)
    N = n_of_pi_from(p, e)
    if N >= 0:
        return QElement(out.num * p ** N, out.den)
    return QElement(out.num, out.den - N)


def unit_log(tower: Tower, x: TowerElement) -> QElement:
    """log of a 1-unit: sum (-1)^(n+1) (x-1)^n / n, v(x-1) > 0 required."""
    z = x - tower.one()
    vz = valuation(z)
    if vz != INF and not vz > 0:
        raise LogDivergence("unit_log needs v(x - 1) > 0")
    p, e = tower.p, tower.e
    prec = x.prec
    nmax = e * (prec + 2) + 1
    dmax = max((pu.vp(n, p) for n in range(p, nmax + 1, p)), default=0)
    pk = p ** prec
    acc = tower.zero(prec)
    zn = tower.one(prec)
    for n in range(1, nmax + 1):
        zn = zn * z
        if zn.is_zero():
            break
        v = pu.vp(n, p) if n % p == 0 else 0
        c = (pu.modinv(n // p ** v, pk) * p ** (dmax - v)) % pk
        if n % 2 == 0:
            c = -c
        acc = acc + zn * c
    return QElement(acc, dmax)


def asd_check(log: LogSeries, fvals: dict, mu, nu, Nmax: int,
              tower: Tower, gammas) -> list:
    """Congruence report for the scaled class triple against the logarithm.

    ``fvals`` holds tower elements "ft_mu", "ft_nu", "f_mu_nu".  For each
    N <= Nmax the combination

        ft_nu phi_mu(b_N)/N - ft_mu phi_nu(b_{p^(r-s) N})/(p^(r-s) N)
                            + f_mu_nu b_{p^r N}/(p^r N)

    must land in p * (integral elements); an entry passes when its valuation
    is >= 1 with a precision certificate of at least 2 (below that the claim
    would be vacuous).
    """
    mu, nu = tuple(mu), tuple(nu)
    r, s = len(mu), len(nu)
    if r < s:
        raise DistinctWordsRequired("need |mu| >= |nu|")
    p = tower.p
    if log.degree < p ** r * Nmax:
        raise SeriesTooShort(
            f"need logarithm degree >= {p ** r * Nmax}, have {log.degree}")
    ft_mu, ft_nu, f_mu_nu = fvals["ft_mu"], fvals["ft_nu"], fvals["f_mu_nu"]
    out = []
    for N in range(1, Nmax + 1):
        pieces = []
        for coeff, b_index, extra_p, twist in (
                (ft_nu, N, 0, mu),
                (-ft_mu, p ** (r - s) * N, r - s, nu),
                (f_mu_nu, p ** r * N, r, ())):
            b = log.b[b_index]
            # b-coefficients live in Z_p and are fixed by every family
            # member; the twist is applied for form
            btw = frobenius_word_apply(tower, gammas, twist,
                                       tower.from_int(b))
            vN = pu.vp(N, p) if N % p == 0 else 0
            unit = N // p ** vN
            den = extra_p + vN
            num = coeff * btw * pu.modinv(unit, p ** tower.K)
            pieces.append(QElement(num, den))
        total = pieces[0] + pieces[1] + pieces[2]
        v = total.valuation()
        cert = total.certified_precision()
        out.append({
            "N": N,
            "valuation": None if v == INF else str(Fraction(v)),
            "certificate": cert,
            "pass": bool((v == INF or v >= 1) and cert >= 2),
        })
    return out


@dataclass(frozen=True)
class PairingContext:
    """Tower, family and the two distinct words of lengths in {1, 2}."""

    tower: Tower
    gammas: tuple
    mu: tuple
    nu: tuple

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(self.gammas))
        object.__setattr__(self, "mu", tuple(self.mu))
        object.__setattr__(self, "nu", tuple(self.nu))
        if self.mu == self.nu:
            raise DistinctWordsRequired("pairing words must differ")
        if not (1 <= len(self.mu) <= 2 and 1 <= len(self.nu) <= 2):
            raise ValueError("word lengths must be 1 or 2")


def pairing(ctx: PairingContext, alpha: TowerElement, beta: TowerElement
            ) -> TowerElement:
    """<alpha, beta> for the context's word pair; bilinear over Q_p and
    antisymmetric both in the arguments and in the words."""
    t = ctx.tower
    p = t.p
    r, s = len(ctx.mu), len(ctx.nu)
    amu = frobenius_word_apply(t, ctx.gammas, ctx.mu, alpha)
    anu = frobenius_word_apply(t, ctx.gammas, ctx.nu, alpha)
    bmu = frobenius_word_apply(t, ctx.gammas, ctx.mu, beta)
    bnu = frobenius_word_apply(t, ctx.gammas, ctx.nu, beta)
    return (bnu * amu - bmu * anu
            + (alpha * bmu - beta * amu) * p ** s
            + (beta * anu - alpha * bnu) * p ** r)


def kernel_dimension(ctx: PairingContext, beta: TowerElement,
                     basis=None, vmax: int | None = None) -> dict:
    """Dimension of {alpha : <alpha, beta> = 0} on the finite tower level.

    The level is a Q_p-space of dimension f*e with basis zeta^i pi^j (the
    default); the map alpha -> <alpha, beta> is Q_p-linear because the
    family fixes Q_p.  Row reduction mod p^K with valuation pivoting yields
    the nullity plus witnesses and a precision certificate.
    """
    t = ctx.tower
    if basis is None:
        basis = []
        for i in range(t.f):
            for j in range(t.e):
                c = [[0] * t.e for _ in range(t.f)]
                c[i][j] = 1
                basis.append(t.element(c))
    columns = [pairing(ctx, b, beta) for b in basis]
    M = [[col.coeffs[i][j] for col in columns]
         for i in range(t.f) for j in range(t.e)]
    data = padic_nullspace(M, t.p, t.K, vmax=vmax)
    witnesses = []
    for vec in data["kernel"]:
        elt = t.zero()
        for coeff, b in zip(vec, basis):
            elt = elt + b * coeff
        witnesses.append(elt)
    data["witnesses"] = witnesses
    return data


def reciprocity_check(ctx: PairingContext, alpha: TowerElement,
                      beta: TowerElement) -> bool:
    """<alpha, beta>_{mu,nu} equals <beta, alpha>_{nu,mu}, both routes
    evaluated independently; arguments must sit inside the convergence
    region v > 1/(p-1)."""
    t = ctx.tower
    bound = Fraction(1, t.p - 1)
    for val in (valuation(alpha), valuation(beta)):
        if val != INF and not val > bound:
            raise BetaTooLarge(f"need v > {bound}")
    lhs = pairing(ctx, alpha, beta)
    flipped = PairingContext(t, ctx.gammas, ctx.nu, ctx.mu)
    rhs = pairing(flipped, beta, alpha)
    return lhs == rhs


# ---------------------------------------------------------------------------
# Strassman counting over Z_p
# ---------------------------------------------------------------------------

@dataclass
class RestrictedSeries:
    """Coefficients a_0..a_M of a series over Z_p whose tail is certified to
    have valuation >= tail_valuation (and eventually to grow)."""

    p: int
    coeffs: list
    tail_valuation: int

    def valuations(self):
        return [None if c == 0 else pu.vp(c, self.p) for c in self.coeffs]


def strassman_count(series: RestrictedSeries):
    """(N*, data): N* is the largest index attaining the minimal coefficient
    valuation, an upper bound for the number of zeros in Z_p.  The tail
    bound must clear the minimum, else the stored window cannot certify."""
    vals = series.valuations()
    finite = [(v, i) for i, v in enumerate(vals) if v is not None]
    if not finite:
        raise ZeroSeries("all stored coefficients vanish")
    vmin = min(v for v, _ in finite)
    if series.tail_valuation <= vmin:
        raise SeriesTooShort(
            "tail valuation bound does not clear the stored minimum")
    nstar = max(i for v, i in finite if v == vmin)
    return nstar, {"min_valuation": vmin, "attained_at":
                   [i for v, i in finite if v == vmin]}


def count_roots_zp(series: RestrictedSeries, depth: int | None = None) -> int:
    """Confirmed count of zeros in Z_p by branch-and-prune root search.

    Residue classes are deepened while f(c) = 0 mod p^level; a class is
    confirmed once the Hensel criterion v(f(c)) > 2 v(f'(c)) holds, after
    which Newton iteration pins the root and duplicates are merged.
    """
    p = series.p
    depth = depth or 12
    work = p ** (depth + 8)

    def f_at(c):
        acc = 0
        for a in reversed(series.coeffs):
            acc = (acc * c + a) % work
        return acc

    def fprime_at(c):
        acc = 0
        for n in range(len(series.coeffs) - 1, 0, -1):
            acc = (acc * c + n * series.coeffs[n]) % work
        return acc

    def newton(c):
        for _ in range(depth + 4):
            fp = fprime_at(c)
            if fp % work == 0:
                return None
            v = _vp_or(fp, p, depth + 8)
            unit = fp // p ** v
            fc = f_at(c)
            if fc % p ** v:
                return None
            c = (c - (fc // p ** v) * pu.modinv(unit, work)) % work
        return c % p ** depth

    roots = set()
    level = 1
    candidates = [c for c in range(p) if f_at(c) % p == 0]
    while candidates and level < depth:
        nxt = []
        for c in candidates:
            vf = _vp_or(f_at(c), p, depth + 8)
            vfp = _vp_or(fprime_at(c), p, depth + 8)
            if vf > 2 * vfp:
                root = newton(c)
                if root is not None:
                    roots.add(root)
            # keep refining: a certified class may still hide further roots
            # at a deeper level when roots cluster p-adically
            for tlift in range(p):
                cc = c + tlift * p ** level
                if _vp_or(f_at(cc), p, depth + 8) >= level + 1:
                    nxt.append(cc)
        candidates = nxt
        level += 1
    for c in candidates:
        root = newton(c)
        if root is not None:
            roots.add(root)
    return len(roots)


def _vp_or(x, p, cap):
    x = x % p ** cap
    if x == 0:
        return cap
    return pu.vp(x, p)
