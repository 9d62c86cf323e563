"""Exact p-adic linear algebra over Z/p^K with valuation pivoting.

Row reduction picks, at every step, a pivot of minimal p-adic valuation over
the whole remaining block (full pivoting with column tracking), divides its
row by the unit part and eliminates below and above; entries indistinguishable
from zero at the working precision never become pivots.  Rank is therefore
certified from below, and the reported kernel dimension comes with the list
of pivot valuations consumed along the way.
"""

from __future__ import annotations

from . import polyutils as pu
from .errors import PrecisionExhausted


def _val(x: int, p: int, K: int) -> int:
    if x % p ** K == 0:
        return K
    return pu.vp(x % p ** K, p)


def padic_nullspace(M, p: int, K: int, vmax: int | None = None):
    """Kernel data of an m x n integer matrix taken mod p^K.

    Returns a dict with ``rank`` (number of pivots of valuation < vmax),
    ``pivot_valuations``, ``kernel`` (basis vectors mod p^cert) and
    ``certificate`` (the absolute precision to which kernel membership is
    guaranteed).  ``vmax`` defaults to K.
    """
    vmax = K if vmax is None else vmax
    pk = p ** K
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[x % pk for x in row] for row in M]
    colperm = list(range(n))
    pivots = []
    r = 0
    loss = 0
    while r < min(m, n):
        best = None
        for i in range(r, m):
            for j in range(r, n):
                if A[i][j]:
                    v = _val(A[i][j], p, K)
                    if v < vmax and (best is None or v < best[0]):
                        best = (v, i, j)
        if best is None:
            break
        v, bi, bj = best
        A[r], A[bi] = A[bi], A[r]
        if bj != r:
            for row in A:
                row[r], row[bj] = row[bj], row[r]
            colperm[r], colperm[bj] = colperm[bj], colperm[r]
        unit = A[r][r] // p ** v
        inv = pu.modinv(unit, pk)
        A[r] = [(x * inv) % pk for x in A[r]]
        # now A[r][r] = p^v; eliminate the whole column
        for i in range(m):
            if i == r or A[i][r] == 0:
                continue
            q = A[i][r] // p ** v
            if A[i][r] % p ** v:
                raise PrecisionExhausted(
                    "pivot valuation not minimal -- elimination bug")
            A[i] = [(x - q * y) % pk for x, y in zip(A[i], A[r])]
        pivots.append(v)
        loss = max(loss, v)
        r += 1
    rank = len(pivots)
    cert = K - sum(pivots)
    if cert < 1:
        raise PrecisionExhausted("pivot valuations consumed the precision")
    pc = p ** cert
    kernel = []
    for free in range(rank, n):
        vec = [0] * n
        vec[colperm[free]] = 1
        for i in range(rank):
            # p^v_i * x_{c_i} + A[i][free] = 0
            v = pivots[i]
            entry = A[i][free] % pk
            if entry % p ** v:
                # certified only below the pivot valuation
                entry = entry % pk
            coeff = (-(entry // p ** v)) % pc
            vec[colperm[i]] = coeff
        kernel.append([x % pc for x in vec])
    return {"rank": rank, "pivot_valuations": pivots, "kernel": kernel,
            "certificate": cert, "dimension": n - rank}


def tower_matrix_rank(entries, precision: int) -> int:
    """Rank lower bound of a matrix of tower elements, by elimination with
    valuation pivoting in the tower (divisions stay exact because the pivot
    valuation is minimal)."""
    from .tower import valuation, INF

    rows = [list(r) for r in entries]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    col = 0
    used = set()
    while True:
        best = None
        for i in range(len(rows)):
            if i in used:
                continue
            for j in range(ncols):
                v = valuation(rows[i][j])
                if v == INF or v >= precision:
                    continue
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            return rank
        v, bi, bj = best
        pivot = rows[bi][bj]
        used.add(bi)
        rank += 1
        for i in range(len(rows)):
            if i in used:
                continue
            target = rows[i][bj]
            if valuation(target) == INF:
                continue
            factor = _tower_divide(target, pivot)
            rows[i] = [a - factor * b for a, b in zip(rows[i], rows[bi])]


def _tower_divide(a, b):
    """a / b for tower elements with v(a) >= v(b); exact within precision."""
    from .tower import valuation

    t = a.tower
    vb = valuation(b)
    shift = int(vb * t.e)
    bb = b
    aa = a
    for _ in range(shift):
        bb = bb.divide_by_pi()
        aa = aa.divide_by_pi()
    return aa * bb.inverse()
