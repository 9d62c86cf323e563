"""Twisted symbol ring over a tower and the rank matrices built from it.

A symbol is a finite left combination  sum_mu  lambda_mu phi_mu  with
lambda_mu in the fraction field of the tower (stored as a numerator element
plus an explicit p-power denominator exponent, so congruence tests stay
exact).  Multiplication twists scalars past the Frobenius letters:

    (lambda phi_mu) (rho phi_nu) = lambda * phi_mu(rho) * phi_{mu nu}.

Evaluation sends a symbol to the additive operator  alpha |-> sum
lambda_mu phi_mu(alpha); it is a ring homomorphism on denominator-free
symbols.

The module also assembles the 6 x 7 coefficient matrix of the six canonical
order-2 character symbols (rows ordered: psi_{1,2}, phi_1 psi_{1,2},
phi_2 psi_{1,2}, psi_{11,1}, psi_{22,2}, psi_{11,22}; columns ordered by the
basis phi_1^2, phi_2^2, phi_1 phi_2, phi_2 phi_1, phi_1, phi_2, 1) together
with exact minor computations at working precision.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FamilyMismatch, MissingClass, PrecisionExhausted
from .tower import (INF, QElement, Tower, TowerElement,
                    frobenius_word_apply)
from .words import word_from_string, word_to_string


class Symbol:
    """Finite map word -> QElement coefficient over a fixed family."""

    __slots__ = ("tower", "gammas", "terms")

    def __init__(self, tower: Tower, gammas, terms=None):
        self.tower = tower
        self.gammas = tuple(gammas)
        t = {}
        for w, c in (terms or {}).items():
            if isinstance(c, TowerElement):
                c = QElement(c, 0)
            if not c.num.is_zero():
                t[tuple(w)] = c
        self.terms = t

    def _check(self, other: "Symbol"):
        if self.tower is not other.tower or self.gammas != other.gammas:
            raise FamilyMismatch("symbols over different families")

    @classmethod
    def scalar(cls, tower, gammas, c) -> "Symbol":
        return cls(tower, gammas, {(): c})

    @classmethod
    def letter(cls, tower, gammas, i: int) -> "Symbol":
        return cls(tower, gammas, {(i,): QElement(tower.one(), 0)})

    def order(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for w, c in other.terms.items():
            t[w] = t[w] + c if w in t else c
        return Symbol(self.tower, self.gammas, t)

    def __neg__(self):
        return Symbol(self.tower, self.gammas,
                      {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def coefficient(self, w) -> QElement:
        return self.terms.get(tuple(w), QElement(self.tower.zero(), 0))

    def to_dict(self):
        return {word_to_string(w): {"num": c.num.to_dict(), "den": c.den}
                for w, c in sorted(self.terms.items())}

    @classmethod
    def from_dict(cls, tower, gammas, d) -> "Symbol":
        terms = {}
        for k, v in d.items():
            terms[word_from_string(k)] = QElement(
                tower.element_from_dict(v["num"]), v["den"])
        return cls(tower, gammas, terms)

    def __repr__(self):
        return f"Symbol({ {word_to_string(w): c for w, c in self.terms.items()} })"


def sym_mul(s1: Symbol, s2: Symbol) -> Symbol:
    """Product in the twisted ring; left-linear in ``s1``."""
    s1._check(s2)
    t = {}
    for w1, c1 in s1.terms.items():
        for w2, c2 in s2.terms.items():
            w = w1 + w2
            twisted = QElement(
                frobenius_word_apply(s1.tower, s1.gammas, w1, c2.num), c2.den)
            add = c1 * twisted
            t[w] = t[w] + add if w in t else add
    return Symbol(s1.tower, s1.gammas, t)


def sym_eval(s: Symbol, alpha: TowerElement) -> QElement:
    """Apply the operator sum lambda_mu phi_mu to ``alpha``."""
    acc = QElement(s.tower.zero(alpha.prec), 0)
    for w, c in sorted(s.terms.items()):
        acc = acc + c * frobenius_word_apply(s.tower, s.gammas, w, alpha)
    if acc.certified_precision() < 1:
        raise PrecisionExhausted("denominators consumed the precision budget")
    return acc


class PMatrix:
    """Matrix of QElement entries sharing one tower, with a working precision."""

    def __init__(self, entries, precision: int):
        self.entries = [list(row) for row in entries]
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        self.precision = precision

    def submatrix(self, rows, cols) -> "PMatrix":
        return PMatrix([[self.entries[i][j] for j in cols] for i in rows],
                       self.precision)

    def det(self) -> QElement:
        """Exact determinant via subset dynamic programming (Laplace).

        ``prev[mask]`` accumulates the signed sum over assignments of the
        first rows to the column set ``mask``; adding column ``col`` for the
        next row flips the sign once per already-used column above ``col``.
        """
        n = self.rows
        assert n == self.cols
        tower = self.entries[0][0].tower
        prev = {0: QElement(tower.one(), 0)}
        for i in range(n):
            cur = {}
            for mask, val in prev.items():
                for col in range(n):
                    if mask & (1 << col):
                        continue
                    sign = -1 if bin(mask >> (col + 1)).count("1") % 2 else 1
                    term = val * self.entries[i][col]
                    if sign < 0:
                        term = -term
                    newmask = mask | (1 << col)
                    cur[newmask] = cur[newmask] + term if newmask in cur else term
            prev = cur
        return prev[(1 << n) - 1]


_GAMMA_BASIS = ("11", "22", "12", "21", "1", "2", "")


def gamma_matrix(fvals: dict, tower: Tower, precision: int,
                 variant: str = "gamma") -> PMatrix:
    """Coefficient matrix of the six canonical order-2 character symbols.

    ``fvals`` maps string keys to tower elements (or QElements): the scaled
    primary classes "ft_1", "ft_2", "ft_11", "ft_22" (plus "ft_12" for the
    gamma-prime variant), the secondary classes "f_1,2", "f_11,1", "f_22,2",
    "f_11,22" ("f_12,1" for gamma-prime) and the twists "ft_1@1", "ft_2@1",
    "f_1,2@1", "ft_1@2", "ft_2@2", "f_1,2@2" used by rows two and three.
    """
    need = {
        "gamma": ["ft_1", "ft_2", "ft_11", "ft_22", "f_1,2", "f_11,1",
                  "f_22,2", "f_11,22", "ft_1@1", "ft_2@1", "f_1,2@1",
                  "ft_1@2", "ft_2@2", "f_1,2@2"],
        "gamma_prime": ["ft_1", "ft_12", "f_12,1"],
        "gamma_tilde": [],
    }
    for key in need["gamma"] + (need[variant] if variant != "gamma" else []):
        if key not in fvals:
            raise MissingClass(key)

    def q(key):
        v = fvals[key]
        return v if isinstance(v, QElement) else QElement(v, 0)

    def nq(key):
        return -q(key)

    zero = QElement(tower.zero(), 0)
    rows = [
        [zero, zero, zero, zero, q("ft_2"), nq("ft_1"), q("f_1,2")],
        [q("ft_2@1"), zero, nq("ft_1@1"), zero, q("f_1,2@1"), zero, zero],
        [zero, nq("ft_1@2"), zero, q("ft_2@2"), zero, q("f_1,2@2"), zero],
        [q("ft_1"), zero, zero, zero, nq("ft_11"), zero, q("f_11,1")],
        [zero, q("ft_2"), zero, zero, zero, nq("ft_22"), q("f_22,2")],
        [q("ft_22"), nq("ft_11"), zero, zero, zero, zero, q("f_11,22")],
    ]
    if variant == "gamma_prime":
        rows[5] = [zero, zero, q("ft_1"), zero, nq("ft_12"), zero, q("f_12,1")]
    mat = PMatrix(rows, precision)
    if variant == "gamma_tilde":
        return mat.submatrix([0, 3, 4, 5], [0, 1, 4, 5, 6])
    return mat


def pmatrix_rank_minors(M: PMatrix, k: int):
    """Rank lower bound from the k x k minors, with valuation certificates.

    A minor counts as nonvanishing iff its valuation is below the matrix
    precision; p-adic rank can only ever be certified from below, so the
    bound is ``k`` when some k-minor is nonvanishing and 0 (no information)
    otherwise.
    """
    from itertools import combinations

    if k > min(M.rows, M.cols):
        raise ValueError("minor size exceeds matrix dimensions")
    reports = []
    rank_lb = 0
    for rows in combinations(range(M.rows), k):
        for cols in combinations(range(M.cols), k):
            d = M.submatrix(rows, cols).det()
            v = d.valuation()
            vanishing = (v == INF) or v >= M.precision
            if not vanishing:
                rank_lb = k
            reports.append({
                "rows": list(rows), "cols": list(cols),
                "valuation": None if v == INF else str(Fraction(v)),
                "vanishing": vanishing,
            })
    return rank_lb, reports
