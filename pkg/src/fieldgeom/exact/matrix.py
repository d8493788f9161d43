"""Rank of polynomial matrices over the fraction field.

Rows are first scaled to integer coefficients. A seeded evaluation modulo a
large prime gives a certified lower bound on the rank together with a pivot
order; if that bound is already ``min(rows, cols)`` we are done. Otherwise
fraction-free (Bareiss) elimination is run on the symbolic matrix, using the
numeric pivots first, and every remaining bordered minor is checked to be
the zero polynomial before a deficiency is reported.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd as igcd
from typing import List, Optional, Sequence

from .poly import MPoly, NVarsMismatch, Terms, _pdivexact, _pmul, _psub

PRIME = (1 << 61) - 1
EVAL_BOX = 1 << 40


@dataclass(frozen=True)
class FFMatrix:
    entries: tuple  # tuple of row tuples of MPoly
    rows: int
    cols: int

    @classmethod
    def of(cls, rows: Sequence[Sequence[MPoly]], nvars: Optional[int] = None) -> "FFMatrix":
        rows = tuple(tuple(r) for r in rows)
        ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("matrix is not rectangular")
            for p in r:
                if nvars is None:
                    nvars = p.nvars
                elif p.nvars != nvars:
                    raise NVarsMismatch("matrix entries do not share nvars")
        return cls(rows, len(rows), ncols)


def _integer_rows(m: FFMatrix) -> List[List[Terms]]:
    out = []
    for row in m.entries:
        den = 1
        for p in row:
            d = p.denominator_lcm()
            den = den * d // igcd(den, d)
        out.append([{e: int(c * den) for e, c in p.terms.items()} for p in row])
    return out


def _eval_mod(t: Terms, pows) -> int:
    total = 0
    for e, c in t.items():
        v = c
        for i, k in enumerate(e):
            if k:
                v = v * pows[i][k] % PRIME
        total += v
    return total % PRIME


def _modp_pivots(rows: List[List[Terms]], nvars: int, rng: random.Random):
    """Gaussian elimination mod p at a random point; returns pivot (row, col) pairs."""
    point = [rng.randrange(1, EVAL_BOX) for _ in range(nvars)]
    maxdeg = 0
    for row in rows:
        for t in row:
            for e in t:
                if e:
                    maxdeg = max(maxdeg, max(e))
    pows = []
    for x in point:
        ps = [1]
        for _ in range(maxdeg):
            ps.append(ps[-1] * x % PRIME)
        pows.append(ps)
    a = [[_eval_mod(t, pows) for t in row] for row in rows]
    nr = len(a)
    nc = len(a[0]) if a else 0
    row_ids = list(range(nr))
    pivots = []
    used_rows = set()
    for c in range(nc):
        piv = next((r for r in row_ids if r not in used_rows and a[r][c]), None)
        if piv is None:
            continue
        used_rows.add(piv)
        pivots.append((piv, c))
        inv = pow(a[piv][c], -1, PRIME)
        for r in row_ids:
            if r in used_rows or not a[r][c]:
                continue
            f = a[r][c] * inv % PRIME
            a[r] = [(x - f * y) % PRIME for x, y in zip(a[r], a[piv])]
        if len(pivots) == nr:
            break
    return pivots


def _bareiss_rank(rows: List[List[Terms]], pivots) -> int:
    """Exact rank by fraction-free elimination, trying the given pivots first."""
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    row_order = [r for r, _ in pivots] + [r for r in range(nr) if r not in {p for p, _ in pivots}]
    col_order = [c for _, c in pivots] + [c for c in range(nc) if c not in {q for _, q in pivots}]
    a = [[rows[r][c] for c in col_order] for r in row_order]
    prev: Terms | None = None
    k = 0
    while k < min(nr, nc):
        # pivot search: numeric pivots sit on the diagonal already
        if not a[k][k]:
            found = None
            for i in range(k, nr):
                for j in range(k, nc):
                    if a[i][j]:
                        found = (i, j)
                        break
                if found:
                    break
            if found is None:
                return k
            i, j = found
            a[k], a[i] = a[i], a[k]
            for row in a:
                row[k], row[j] = row[j], row[k]
        piv = a[k][k]
        for i in range(k + 1, nr):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, nc):
                v = _psub(_pmul(piv, row_i[j]), _pmul(aik, row_k[j]))
                if prev is not None and v:
                    v = _pdivexact(v, prev)
                row_i[j] = v
            row_i[k] = {}
        prev = piv
        k += 1
    return k


def matrix_rank_ff(m: FFMatrix | Sequence[Sequence[MPoly]], rng: random.Random | None = None) -> int:
    """Rank of ``m`` over the rational function field."""
    if not isinstance(m, FFMatrix):
        m = FFMatrix.of(m)
    if m.rows == 0 or m.cols == 0:
        return 0
    nvars = m.entries[0][0].nvars
    rng = rng or random.Random(0x5EED)
    rows = _integer_rows(m)
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    pivots = _modp_pivots(rows, nvars, rng)
    if len(pivots) == min(len(rows), m.cols):
        return len(pivots)
    return _bareiss_rank(rows, pivots)
