"""The pregeometry (L, acl_K) for L = Q(t1..tn) over K = Q(S).

Transcendence degree is the rank of the Jacobian restricted to the columns
of the variables outside S (characteristic 0). An independent brute-force
search for annihilating polynomials is provided as a cross-check.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from .exact import MPoly, RatFunc, matrix_rank_ff, parse_expr
from .exact.poly import _pmul

ElementSet = Sequence[RatFunc]


class PreconditionError(ValueError):
    """An operation was called outside its domain (dependent witnesses, bad ranks...)."""


class SearchSpaceExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class ExtensionSpec:
    """K = Q(t_s : s in k_vars) inside L = Q(t1..tn); indices are 1-based."""

    nvars: int
    k_vars: frozenset = field(default_factory=frozenset)
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "k_vars", frozenset(self.k_vars))
        if any(not 1 <= s <= self.nvars for s in self.k_vars):
            raise ValueError(f"k_vars {sorted(self.k_vars)} outside 1..{self.nvars}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"t{i + 1}" for i in range(self.nvars)))
        elif len(self.labels) != self.nvars:
            raise ValueError("need one label per variable")

    @property
    def free_vars(self) -> Tuple[int, ...]:
        """1-based indices of the variables outside K (a transcendence basis of L/K)."""
        return tuple(i for i in range(1, self.nvars + 1) if i not in self.k_vars)

    @property
    def trdeg_L(self) -> int:
        return self.nvars - len(self.k_vars)

    def require_trdeg(self, k: int, why: str = ""):
        if self.trdeg_L < k:
            raise PreconditionError(f"need tr deg_K(L) >= {k}{' for ' + why if why else ''}, have {self.trdeg_L}")

    def parse(self, text: str) -> RatFunc:
        return parse_expr(text, self.nvars, self.labels)

    def var(self, i: int) -> RatFunc:
        """The variable t_i (1-based)."""
        return RatFunc.var(i - 1, self.nvars)

    def const(self, c) -> RatFunc:
        return RatFunc.const(c, self.nvars)

    def fmt(self, f: RatFunc) -> str:
        return f.to_str(self.labels)

    def to_dict(self) -> dict:
        return {"nvars": self.nvars, "k_vars": sorted(self.k_vars), "labels": list(self.labels)}


@lru_cache(maxsize=100_000)
def _jacobian_row(f: RatFunc, cols: Tuple[int, ...]) -> Tuple[MPoly, ...]:
    # row scaled by den^2: den * d(num) - num * d(den)
    n, d = f.num, f.den
    if d.is_constant():
        return tuple(n.diff(j) for j in cols)
    return tuple(n.diff(j) * d - n * d.diff(j) for j in cols)


def jacobian(spec: ExtensionSpec, xs: ElementSet) -> List[Tuple[MPoly, ...]]:
    cols = tuple(i - 1 for i in spec.free_vars)
    return [_jacobian_row(x, cols) for x in xs]


def _check(spec: ExtensionSpec, xs: ElementSet):
    for x in xs:
        if x.nvars != spec.nvars:
            raise ValueError(f"element {x} has {x.nvars} variables, extension has {spec.nvars}")


def trdeg(spec: ExtensionSpec, xs: ElementSet, rng: random.Random | None = None) -> int:
    """Transcendence degree of K(xs) over K."""
    xs = list(xs)
    _check(spec, xs)
    if not xs or not spec.free_vars:
        return 0
    return matrix_rank_ff(jacobian(spec, xs), rng)


def in_closure(spec: ExtensionSpec, y: RatFunc, xs: ElementSet, rng=None) -> bool:
    """Whether y is algebraic over K(xs)."""
    xs = list(xs)
    return trdeg(spec, xs + [y], rng) == trdeg(spec, xs, rng)


def is_independent(spec: ExtensionSpec, xs: ElementSet, rng=None) -> bool:
    xs = list(xs)
    return trdeg(spec, xs, rng) == len(xs)


def basis_of(spec: ExtensionSpec, xs: ElementSet, rng=None) -> List[RatFunc]:
    """Greedy maximal independent subset, scanning in input order."""
    basis: List[RatFunc] = []
    for x in xs:
        if trdeg(spec, basis + [x], rng) == len(basis) + 1:
            basis.append(x)
    return basis


def exchange_check(spec: ExtensionSpec, a: RatFunc, y: RatFunc, A: ElementSet, rng=None) -> bool:
    """Truth of  a in acl(A+y) minus acl(A)  =>  y in acl(A+a)  for this instance."""
    A = list(A)
    antecedent = in_closure(spec, a, A + [y], rng) and not in_closure(spec, a, A, rng)
    if not antecedent:
        return True
    return in_closure(spec, y, A + [a], rng)


# -- brute-force annihilator search -------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    independent: bool
    max_degree: int
    annihilator: Optional[MPoly] = None
    degree: Optional[int] = None

    def labels(self, k: int, spec: ExtensionSpec) -> List[str]:
        out = [f"y{i + 1}" for i in range(k)]
        if self.annihilator is not None and self.annihilator.nvars > k:
            out += list(spec.labels)
        return out


def _monomials(k: int, d: int):
    for total in range(d + 1):
        for combo in itertools.combinations_with_replacement(range(k), total):
            e = [0] * k
            for i in combo:
                e[i] += 1
            yield tuple(e)


def _solve_kernel(cols: List[dict], zero, one):
    """One nonzero kernel vector of the matrix given column-wise, or None."""
    rows_keys = sorted({r for c in cols for r in c})
    m = [[c.get(r, zero) for c in cols] for r in rows_keys]
    ncols = len(cols)
    pivot_cols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = one / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivot_cols.append(c)
        r += 1
        if r == len(m):
            break
    free = [c for c in range(ncols) if c not in pivot_cols]
    if not free:
        return None
    fc = free[0]
    vec = [zero] * ncols
    vec[fc] = one
    for i, pc in enumerate(pivot_cols):
        vec[pc] = -m[i][fc]
    return vec


def dependence_oracle_bruteforce(
    spec: ExtensionSpec, xs: ElementSet, max_degree: int = 4, monomial_cap: int = 2000
) -> OracleResult:
    """Search for P != 0 of total degree <= max_degree with P(xs) = 0 over K.

    Coefficients of P lie in K = Q(S). The annihilator is returned in
    variables y1..yk (k = len(xs)); when S is nonempty the ring is extended by
    t1..tn so the coefficients can be written as polynomials in S.
    """
    xs = list(xs)
    _check(spec, xs)
    k = len(xs)
    if k == 0:
        return OracleResult(True, max_degree)
    n = spec.nvars
    kvars = sorted(i - 1 for i in spec.k_vars)
    for d in range(1, max_degree + 1):
        monos = list(_monomials(k, d))
        if len(monos) > monomial_cap:
            raise SearchSpaceExceeded(f"{len(monos)} unknowns at degree {d} exceeds cap {monomial_cap}")
        pow_cache = {}

        def pw(i, part, e):
            key = (i, part, e)
            if key not in pow_cache:
                base = xs[i].num if part == 0 else xs[i].den
                pow_cache[key] = (base ** e).terms
            return pow_cache[key]

        cols = []
        row_keys = set()
        for alpha in monos:
            t = {(0,) * n: 1}
            for i, a in enumerate(alpha):
                t = _pmul(t, pw(i, 0, a))
                t = _pmul(t, pw(i, 1, d - a))
            col = {}
            for e, c in t.items():
                free_part = tuple(0 if j in kvars else x for j, x in enumerate(e))
                s_part = tuple(x if j in kvars else 0 for j, x in enumerate(e))
                col.setdefault(free_part, {})[s_part] = c
            row_keys.update(col)
            cols.append(col)
        if len(row_keys) > monomial_cap:
            raise SearchSpaceExceeded(f"{len(row_keys)} equations at degree {d} exceeds cap {monomial_cap}")
        if kvars:
            cols_f = [{r: RatFunc.from_poly(MPoly(p, n)) for r, p in col.items()} for col in cols]
            vec = _solve_kernel(cols_f, RatFunc.const(0, n), RatFunc.const(1, n))
        else:
            cols_f = [{r: Fraction(p[(0,) * n]) for r, p in col.items()} for col in cols]
            vec = _solve_kernel(cols_f, Fraction(0), Fraction(1))
        if vec is None:
            continue
        if kvars:
            den = MPoly.const(1, n)
            for v in vec:
                if not v.is_zero() and not v.den.divides(den):
                    den = den * v.den.exact_div(den.gcd(v.den))
            terms = {}
            for alpha, v in zip(monos, vec):
                if v.is_zero():
                    continue
                coeff = (v * RatFunc.from_poly(den)).num
                for e, c in coeff.terms.items():
                    terms[alpha + e] = c
            ann = MPoly(terms, k + n)
            # strip common polynomial content in S so the result is canonical-ish
            g = None
            for alpha, v in zip(monos, vec):
                if not v.is_zero():
                    c = (v * RatFunc.from_poly(den)).num
                    g = c if g is None else g.gcd(c)
            if g is not None and not g.is_constant():
                ann = ann.exact_div(g.extend(k + n, k))
            ann = ann.monic()
        else:
            ann = MPoly({alpha: v for alpha, v in zip(monos, vec) if v}, k).monic()
        return OracleResult(False, max_degree, ann, d)
    return OracleResult(True, max_degree)


def evaluate_annihilator(spec: ExtensionSpec, ann: MPoly, xs: ElementSet) -> RatFunc:
    """P(xs) as an element of L; zero for a genuine annihilator."""
    xs = list(xs)
    images = xs + [spec.var(i + 1) for i in range(ann.nvars - len(xs))]
    return ann.compose(images)
