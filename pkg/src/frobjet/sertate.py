"""Deformation-parameter expansions and the symbolic identity engine.

Everything here lives over the base p (unramified directions), where the
expansion of each modular-type class in the deformation coordinate T is a
universal linear combination of the fundamental series

    Psi_i = (1/p) (phi_i - p) log(1 + T)

and its phi-twists.  Two exact layers implement this:

``STSeries``
    truncated series over exact rationals in T and the variables
    delta_mu T, with the prolongation action T -> T^p + p delta_i T.  Used
    for the fundamental series, the canonical derivation
    (1 + T^phi_mu) d/d(delta_mu T), and their defining identities.

``PsiPoly``
    polynomials over Q in commuting slot variables (the twists Psi_i^phi_mu,
    or the parameter slots beta^phi_mu) together with c and p as genuine
    indeterminates.  The catalog of quadratic/cubic relations between the
    classes reduces to the zero PsiPoly, with c-homogeneity checked first so
    no conclusion ever depends on the value of the unit c.

The expansion table itself (``st_expansion``) hard-codes the known closed
forms; the relation catalog is data (data/relations.json) mapping relation
ids to signed products of form ids with optional twists.  Every relation is
verified together with its 1 <-> 2 index swap.

The tower-valued evaluations (``st_f_values``) specialize the same closed
forms at a parameter value beta of positive valuation; with the convention
c = 1 they feed the coefficient-matrix checks and the congruence tests.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from importlib import resources

from .errors import (BetaTooLarge, DivisionByZero, FamilyMismatch,
                     OrderOverflow, UnknownForm, UnknownRelation)
from .tower import (Tower, TowerElement, frobenius_word_apply, n_of_pi_from,
                    valuation)
from .words import words_up_to, word_from_string


# ---------------------------------------------------------------------------
# exact truncated series in T, delta_mu T over Q (pi = p)
# ---------------------------------------------------------------------------

class STRing:
    """Shape of the exact expansion ring: directions n, order r, degree D."""

    def __init__(self, p: int, n: int, r: int, D: int):
        self.p, self.n, self.r, self.D = p, n, r, D
        nonempty = words_up_to(n, r)[1:]
        self.var_words = [None] + nonempty
        self.word_to_var = {w: i + 1 for i, w in enumerate(nonempty)}

    def zero(self):
        return STSeries(self, {})

    def one(self):
        return STSeries(self, {(): Fraction(1)})

    def T(self):
        return STSeries(self, {((0, 1),): Fraction(1)})

    def delta_var(self, word):
        w = tuple(word)
        if w not in self.word_to_var:
            raise OrderOverflow(f"word {w} exceeds order {self.r}")
        return STSeries(self, {((self.word_to_var[w], 1),): Fraction(1)})

    def log1p(self):
        """log(1 + T) = sum (-1)^(m+1) T^m / m, truncated at D."""
        return STSeries(self, {((0, m),): Fraction((-1) ** (m + 1), m)
                               for m in range(1, self.D + 1)})


class STSeries:
    """Sparse truncated polynomial with exact Fraction coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: STRing, terms):
        self.ring = ring
        D = ring.D
        self.terms = {m: c for m, c in terms.items()
                      if c != 0 and sum(e for _, e in m) <= D}

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = STSeries(self.ring, {(): Fraction(other)})
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, Fraction(0)) + c
        return STSeries(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        return STSeries(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = STSeries(self.ring, {(): Fraction(other)})
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return STSeries(self.ring,
                            {m: c * other for m, c in self.terms.items()})
        D = self.ring.D
        out = {}
        for m1, c1 in self.terms.items():
            d1 = sum(e for _, e in m1)
            for m2, c2 in other.terms.items():
                if d1 + sum(e for _, e in m2) > D:
                    continue
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return STSeries(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = STSeries(self.ring, {(): Fraction(other)})
        return self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def coefficient(self, mono) -> Fraction:
        return self.terms.get(tuple(sorted(mono)), Fraction(0))

    def derivative(self, var: int) -> "STSeries":
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if var not in d:
                continue
            e = d[var]
            if e == 1:
                del d[var]
            else:
                d[var] = e - 1
            key = tuple(sorted(d.items()))
            out[key] = out.get(key, Fraction(0)) + c * e
        return STSeries(self.ring, out)

    def restrict_degree(self, D2: int) -> "STSeries":
        return STSeries(self.ring, {m: c for m, c in self.terms.items()
                                    if sum(e for _, e in m) <= D2})

    def substitute_zero(self, var: int) -> "STSeries":
        return STSeries(self.ring,
                        {m: c for m, c in self.terms.items()
                         if all(v != var for v, _ in m)})

    def substitute(self, var: int, value: "STSeries") -> "STSeries":
        """Replace one variable by a series (truncation applies)."""
        out = self.ring.zero()
        pows = {0: self.ring.one()}
        for m, c in self.terms.items():
            rest = tuple((v, e) for v, e in m if v != var)
            e = dict(m).get(var, 0)
            if e not in pows:
                pows[e] = value ** e
            out = out + (STSeries(self.ring, {rest: c}) * pows[e])
        return out

    def __repr__(self):
        return f"STSeries({len(self.terms)} terms)"


def _mono_mul(m1, m2):
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def st_phi(ring: STRing, i: int, F: STSeries) -> STSeries:
    """Prolongation for direction i: T -> T^p + p delta_i T, coefficients
    (rationals) fixed."""
    import math as _math
    if not 1 <= i <= ring.n:
        raise FamilyMismatch(f"direction {i} outside the family")
    p, D = ring.p, ring.D
    out = ring.zero()
    for mono, coeff in F.terms.items():
        acc = {(): coeff}
        for v, e in mono:
            if v == 0:
                succ = ring.word_to_var.get((i,))
            else:
                w = (i,) + ring.var_words[v]
                succ = ring.word_to_var.get(w)
            if succ is None:
                raise OrderOverflow("prolongation exceeds configured order")
            nxt = {}
            for m0, c0 in acc.items():
                deg0 = sum(x for _, x in m0)
                for j in range(e + 1):
                    deg1 = p * (e - j) + j
                    if deg0 + deg1 > D:
                        continue
                    mono1 = []
                    if e - j:
                        mono1.append((v, p * (e - j)))
                    if j:
                        mono1.append((succ, j))
                    m = _mono_mul(m0, tuple(mono1))
                    c = c0 * _math.comb(e, j) * Fraction(p) ** j
                    nxt[m] = nxt.get(m, Fraction(0)) + c
            acc = nxt
        for m, c in acc.items():
            out.terms[m] = out.terms.get(m, Fraction(0)) + c
    return STSeries(ring, out.terms)


def st_phi_word(ring: STRing, word, F: STSeries) -> STSeries:
    for letter in reversed(tuple(word)):
        F = st_phi(ring, letter, F)
    return F


def psi_st_series(ring: STRing, i: int) -> STSeries:
    """The fundamental series (1/p)(phi_i - p) log(1 + T)."""
    L = ring.log1p()
    return (st_phi(ring, i, L) - Fraction(ring.p) * L) * Fraction(1, ring.p)


def psi_series_form(ring: STRing, i: int, sign_exponent_offset: int
                    ) -> STSeries:
    """The explicit series (1/p) sum_n (-1)^(n + off) (p^n/n) z^n with
    z = delta_i(1+T) / (1+T)^p; offset 1 reproduces psi_st_series, offset 0
    is the competing sign convention (kept so the discrepancy is testable).
    """
    import math as _math
    p, D = ring.p, ring.D
    # delta_i(1+T) = delta_i T + C_p(1, T)
    cp = {((0, j),): Fraction(-_math.comb(p, j), p) for j in range(1, p)}
    dT = ring.delta_var((i,))
    z_num = dT + STSeries(ring, cp)
    onepT = ring.one() + ring.T()
    inv = _unit_inverse(onepT ** p)
    z = z_num * inv
    acc = ring.zero()
    zk = ring.one()
    for n in range(1, D + 1):
        zk = zk * z
        if zk.is_zero():
            break
        acc = acc + zk * Fraction((-1) ** (n + sign_exponent_offset)
                                  * p ** n, n)
    return acc * Fraction(1, p)


def _unit_inverse(F: STSeries) -> STSeries:
    ring = F.ring
    c0 = F.coefficient(())
    if c0 == 0:
        raise DivisionByZero("series has no unit constant term")
    u = (F * Fraction(1, c0)) - 1
    out = ring.one()
    term = ring.one()
    for _ in range(ring.D):
        term = term * (-u)
        if term.is_zero():
            break
        out = out + term
    return out * Fraction(1, c0)


def serre_operator(ring: STRing, mu, F: STSeries) -> STSeries:
    """The canonical derivation (1 + T^phi_mu) dF/d(delta_mu T)."""
    w = tuple(mu)
    if w not in ring.word_to_var:
        raise OrderOverflow(f"word {w} exceeds order {ring.r}")
    Tphi = st_phi_word(ring, w, ring.T())
    return (ring.one() + Tphi) * F.derivative(ring.word_to_var[w])


# ---------------------------------------------------------------------------
# PsiPoly: exact polynomials in slot variables and the indeterminates c, p
# ---------------------------------------------------------------------------

class PsiPoly:
    """Sparse polynomial; monomial = (c_exp, p_exp, ((slot, exp), ...))."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items()
                      if c != 0}

    @classmethod
    def const(cls, value=1, c_exp=0, p_exp=0) -> "PsiPoly":
        return cls({(c_exp, p_exp, ()): Fraction(value)})

    @classmethod
    def slot(cls, name, c_exp=0, p_exp=0, value=1) -> "PsiPoly":
        return cls({(c_exp, p_exp, ((name, 1),)): Fraction(value)})

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, Fraction(0)) + c
        return PsiPoly(t)

    def __neg__(self):
        return PsiPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PsiPoly({m: c * other for m, c in self.terms.items()})
        out = {}
        for (c1, p1, v1), a1 in self.terms.items():
            for (c2, p2, v2), a2 in other.terms.items():
                vars_ = dict(v1)
                for s, e in v2:
                    vars_[s] = vars_.get(s, 0) + e
                m = (c1 + c2, p1 + p2, tuple(sorted(vars_.items())))
                out[m] = out.get(m, Fraction(0)) + a1 * a2
        return PsiPoly(out)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def c_degrees(self):
        return sorted({m[0] for m in self.terms})

    def twist(self, j: int) -> "PsiPoly":
        """Apply phi_j: slot words get j prepended; c and p are fixed."""
        out = {}
        for (ce, pe, vars_), a in self.terms.items():
            nv = []
            for (kind, i, w), e in vars_:
                nv.append(((kind, i, str(j) + w), e))
            m = (ce, pe, tuple(sorted(nv)))
            out[m] = out.get(m, Fraction(0)) + a
        return PsiPoly(out)

    def swap12(self) -> "PsiPoly":
        """Exchange the two directions everywhere (indices and words)."""
        flip = {"1": "2", "2": "1"}
        out = {}
        for (ce, pe, vars_), a in self.terms.items():
            nv = []
            for (kind, i, w), e in vars_:
                ni = {1: 2, 2: 1}.get(i, i)
                nw = "".join(flip.get(ch, ch) for ch in w)
                nv.append(((kind, ni, nw), e))
            m = (ce, pe, tuple(sorted(nv)))
            out[m] = out.get(m, Fraction(0)) + a
        return PsiPoly(out)

    def __repr__(self):
        if not self.terms:
            return "PsiPoly(0)"
        bits = []
        for (ce, pe, vars_), a in sorted(self.terms.items()):
            s = [str(a)]
            if ce:
                s.append(f"c^{ce}")
            if pe:
                s.append(f"p^{pe}")
            for (kind, i, w), e in vars_:
                tag = f"{kind}{i}" + (f"^({w})" if w else "")
                s.append(tag if e == 1 else f"{tag}**{e}")
            bits.append("*".join(s))
        return "PsiPoly(" + " + ".join(bits) + ")"


def _psi(i: int, word: str = "") -> tuple:
    return ("psi", i, word)


def _S(i, w="", c=1, p=0, v=1):
    return PsiPoly.slot(_psi(i, w), c_exp=c, p_exp=p, value=v)


_EXPANSIONS = None


def _build_expansions():
    """Closed-form expansions of every order <= 2 class, in Psi slots."""
    P = {}
    P["f_1"] = _S(1)
    P["f_11"] = _S(1, "1") + _S(1, "", p=1)
    P["f_12"] = _S(2, "1") + _S(1, "", p=1)
    P["f_11,1"] = _S(1, "1", p=1)
    P["f_1,2"] = _S(1, "", p=1) - _S(2, "", p=1)
    P["f_11,22"] = (_S(1, "1", p=2) + _S(1, "", p=3)
                    - _S(2, "2", p=2) - _S(2, "", p=3))
    P["f_12,1"] = _S(2, "1", p=1)
    P["f_12,21"] = (_S(2, "1", p=2) + _S(1, "", p=3)
                    - _S(1, "2", p=2) - _S(2, "", p=3))
    P["f_11,2"] = _S(1, "1", p=1) + _S(1, "", p=2) - _S(2, "", p=2)
    P["f_11,12"] = _S(1, "1", p=2) - _S(2, "1", p=2)
    P["f_12,2"] = _S(2, "1", p=1) + _S(1, "", p=2) - _S(2, "", p=2)
    P["f_11,21"] = (_S(1, "1", p=2) - _S(1, "2", p=2)
                    + _S(1, "", p=3) - _S(2, "", p=3))
    # unit forms on the ordinary locus expand to 1
    P["fdel1"] = PsiPoly.const(1)
    P["fdel2"] = PsiPoly.const(1)
    P["finv1"] = PsiPoly.const(1)
    P["finv2"] = PsiPoly.const(1)
    # index swaps of everything above
    for key, val in list(P.items()):
        P[_swap_id(key)] = val.swap12()
    return P


def _swap_id(form_id: str) -> str:
    return form_id.translate(str.maketrans("12", "21"))


def st_expansion(form_id: str) -> PsiPoly:
    """Expansion of a class by id ("f_1", "f_12,21", ...); pairs not in the
    table resolve through antisymmetry f_{mu,nu} = -f_{nu,mu}."""
    global _EXPANSIONS
    if _EXPANSIONS is None:
        _EXPANSIONS = _build_expansions()
    if form_id in _EXPANSIONS:
        return _EXPANSIONS[form_id]
    m = re.fullmatch(r"f_(\d+),(\d+)", form_id)
    if m:
        flipped = f"f_{m.group(2)},{m.group(1)}"
        if flipped in _EXPANSIONS:
            return -_EXPANSIONS[flipped]
    raise UnknownForm(form_id)


def beta_expansion(form_id: str) -> PsiPoly:
    """Parameter-slot version: primary b_mu = beta^phi_mu - p^|mu| beta,
    secondary b_mu,nu = p^|nu| beta^phi_mu - p^|mu| beta^phi_nu (c = 1
    convention, common power of p stripped)."""
    def bslot(word: str, p_exp=0, v=1):
        return PsiPoly.slot(("beta", 0, word), p_exp=p_exp, value=v)

    m = re.fullmatch(r"b_(\d+)", form_id)
    if m:
        mu = m.group(1)
        return bslot(mu) - bslot("", p_exp=len(mu))
    m = re.fullmatch(r"b_(\d+),(\d+)", form_id)
    if m:
        mu, nu = m.group(1), m.group(2)
        return bslot(mu, p_exp=len(nu)) - bslot(nu, p_exp=len(mu))
    raise UnknownForm(form_id)


# ---------------------------------------------------------------------------
# relation catalog
# ---------------------------------------------------------------------------

_COEFF_RE = re.compile(r"^(-)?(?:(\d+)|p(?:\^(\d+))?)$")


def _parse_coeff(s: str) -> PsiPoly:
    m = _COEFF_RE.match(s)
    if not m:
        raise ValueError(f"bad coefficient literal {s!r}")
    neg, num, pexp = m.groups()
    if num is not None:
        poly = PsiPoly.const(int(num))
    else:
        poly = PsiPoly.const(1, p_exp=int(pexp) if pexp else 1)
    return -poly if neg else poly


def load_relation_catalog() -> dict:
    data = resources.files("frobjet.data").joinpath("relations.json")
    return json.loads(data.read_text())


def verify_identity(relation_id: str, catalog: dict | None = None) -> dict:
    """Reduce one cataloged relation (and its index swap) symbolically.

    Returns {"relation", "status", "residual", "c_homogeneous",
    "swap_status"}; status is "zero" exactly when the substituted polynomial
    vanishes identically with c and p indeterminate.
    """
    catalog = catalog or load_relation_catalog()
    if relation_id not in catalog:
        raise UnknownRelation(relation_id)
    entry = catalog[relation_id]
    expander = beta_expansion if entry.get("slots") == "beta" else st_expansion

    def reduce_terms(terms):
        total = PsiPoly()
        c_degs = set()
        for coeff_str, factors in terms:
            term = _parse_coeff(coeff_str)
            for form_id, twist in factors:
                val = expander(form_id)
                for ch in reversed(twist):
                    val = val.twist(int(ch))
                term = term * val
            degs = term.c_degrees()
            c_degs.update(degs if degs else [0])
            total = total + term
        return total, c_degs

    total, c_degs = reduce_terms(entry["terms"])
    swapped = [[c, [[_swap_id(f), _swap_id(tw)] for f, tw in fs]]
               for c, fs in entry["terms"]]
    total_sw, _ = reduce_terms(swapped)
    return {
        "relation": relation_id,
        "status": "zero" if total.is_zero() else "nonzero",
        "residual": repr(total),
        "c_homogeneous": len(c_degs) <= 1,
        "swap_status": "zero" if total_sw.is_zero() else "nonzero",
    }


def verify_all_identities() -> list:
    catalog = load_relation_catalog()
    return [verify_identity(rid, catalog) for rid in catalog]


# ---------------------------------------------------------------------------
# symbolic coefficient matrix of the six order-2 character symbols
# ---------------------------------------------------------------------------

def gamma_symbol_rows_beta() -> list:
    """Rows of the 6 x 7 symbol matrix over parameter slots (c = 1, the
    common row factor p^(N+1) stripped): six character symbols against the
    basis (11, 22, 12, 21, 1, 2, empty)."""
    def row(mu, nu):
        ft_nu = beta_expansion(f"b_{nu}")
        ft_mu = beta_expansion(f"b_{mu}")
        sec = beta_expansion(f"b_{mu},{nu}")
        cols = {mu: ft_nu, nu: -ft_mu, "": sec}
        return [cols.get(w, PsiPoly()) for w in
                ("11", "22", "12", "21", "1", "2", "")]

    r1 = row("1", "2")
    rows = [r1,
            [c.twist(1) for c in _shift_row(r1, 1)],
            [c.twist(2) for c in _shift_row(r1, 2)],
            row("11", "1"), row("22", "2"), row("11", "22")]
    return rows


def _shift_row(row, j):
    """Multiply a degree-1 symbol row by phi_j on the left: the coefficient
    at word w moves to word jw."""
    basis = ("11", "22", "12", "21", "1", "2", "")
    out = [PsiPoly() for _ in basis]
    for w, c in zip(basis, row):
        if c.is_zero():
            continue
        target = str(j) + w
        out[basis.index(target)] = c
    return out


def psipoly_det(rows) -> PsiPoly:
    """Determinant of a square PsiPoly matrix via subset DP."""
    n = len(rows)
    prev = {0: PsiPoly.const(1)}
    for i in range(n):
        cur = {}
        for mask, val in prev.items():
            for col in range(n):
                if mask & (1 << col):
                    continue
                entry = rows[i][col]
                if entry.is_zero():
                    continue
                sign = -1 if bin(mask >> (col + 1)).count("1") % 2 else 1
                term = val * entry
                if sign < 0:
                    term = -term
                newmask = mask | (1 << col)
                cur[newmask] = cur[newmask] + term if newmask in cur else term
        prev = cur
    return prev.get((1 << n) - 1, PsiPoly())


# ---------------------------------------------------------------------------
# tower-valued specializations
# ---------------------------------------------------------------------------

def check_beta(tower: Tower, beta: TowerElement):
    v = valuation(beta)
    if not v > Fraction(1, tower.p - 1):
        raise BetaTooLarge(
            f"need v(beta) > 1/(p-1) = 1/{tower.p - 1}, got {v}")


def st_f_values(tower: Tower, gammas, beta: TowerElement, mu, nu=None):
    """Class value at parameter beta, convention c = 1.

    Primary: beta^phi_mu - p^|mu| beta.  Secondary (nu given):
    p^|nu| beta^phi_mu - p^|mu| beta^phi_nu.  The caller scales by
    p^(N(pi)+1) where the symbol normalization requires it; see st_f_table.
    """
    check_beta(tower, beta)
    mu = tuple(mu)
    bmu = frobenius_word_apply(tower, gammas, mu, beta)
    if nu is None:
        return bmu - beta * tower.p ** len(mu)
    nu = tuple(nu)
    bnu = frobenius_word_apply(tower, gammas, nu, beta)
    return bmu * tower.p ** len(nu) - bnu * tower.p ** len(mu)


def st_f_table(tower: Tower, gammas, beta: TowerElement) -> dict:
    """All entries the 6 x 7 coefficient matrix needs, at parameter beta.

    Scaled primaries carry p^(N+1) ("ft_*"); the secondary entries carry the
    same p^(N+1) so each matrix row is exactly a symbol coefficient vector
    (one common scale per row never changes minor vanishing, but mixing
    scaled and unscaled entries would).
    """
    check_beta(tower, beta)
    N = n_of_pi_from(tower.p, tower.e)
    scale = tower.p ** (N + 1) if N + 1 >= 0 else None
    if scale is None:
        raise BetaTooLarge("negative symbol scale is not supported here")
    table = {}
    for mu in ("1", "2", "11", "22", "12", "21"):
        table[f"ft_{mu}"] = st_f_values(
            tower, gammas, beta, word_from_string(mu)) * scale
    for mu, nu in (("1", "2"), ("11", "1"), ("22", "2"), ("11", "22"),
                   ("12", "1")):
        table[f"f_{mu},{nu}"] = st_f_values(
            tower, gammas, beta, word_from_string(mu),
            word_from_string(nu)) * scale
    for key in ("ft_1", "ft_2", "f_1,2"):
        for j in (1, 2):
            table[f"{key}@{j}"] = frobenius_word_apply(
                tower, gammas, (j,), table[key])
    return table


# ---------------------------------------------------------------------------
# period invariants
# ---------------------------------------------------------------------------

def period_invariants(p: int, slots: dict) -> dict:
    """Ratios of the expansion slots and the four projective invariants.

    ``slots`` maps "psi_i" and "psi_i@j" to exact Fractions.  Division by a
    vanishing denominator raises DivisionByZero.
    """
    def get(name):
        if name not in slots:
            raise UnknownForm(name)
        return Fraction(slots[name])

    psi1 = get("psi_1")
    if psi1 == 0:
        raise DivisionByZero("psi_1 slot must be nonzero")
    t0 = get("psi_2") / psi1
    t = {}
    for i in (1, 2):
        for j in (1, 2):
            t[(i, j)] = get(f"psi_{i}@{j}") / psi1

    def safe_div(num, den, what):
        if den == 0:
            raise DivisionByZero(f"vanishing denominator in {what}")
        return num / den

    tau = safe_div(t[(1, 1)] + p - p * t0, t0 * t[(1, 1)], "tau")
    tau_prime = safe_div(t[(2, 1)] + p - p * t0, t0 * t[(2, 1)], "tau_prime")
    tau_dprime = safe_div(t0 * (t[(2, 2)] + p * t0 - p), t[(2, 2)],
                          "tau_dprime")
    tau_tprime = safe_div(t0 * (t[(1, 2)] + p * t0 - p), t[(1, 2)],
                          "tau_tprime")
    return {
        "t0": t0, "t11": t[(1, 1)], "t12": t[(1, 2)],
        "t21": t[(2, 1)], "t22": t[(2, 2)],
        "tau": tau, "tau_prime": tau_prime,
        "tau_dprime": tau_dprime, "tau_tprime": tau_tprime,
    }


def invert_period_invariants(p: int, t0: Fraction, tau: Fraction,
                             tau_prime: Fraction, tau_dprime: Fraction,
                             tau_tprime: Fraction) -> dict:
    """Solve the four invariant equations back for the slot ratios."""
    def safe(num, den, what):
        if den == 0:
            raise DivisionByZero(f"vanishing denominator inverting {what}")
        return num / den

    t11 = safe(p * (1 - t0), t0 * tau - 1, "tau")
    t21 = safe(p * (1 - t0), t0 * tau_prime - 1, "tau_prime")
    t22 = safe(p * t0 * (t0 - 1), tau_dprime - t0, "tau_dprime")
    t12 = safe(p * t0 * (t0 - 1), tau_tprime - t0, "tau_tprime")
    return {"t11": t11, "t12": t12, "t21": t21, "t22": t22}
