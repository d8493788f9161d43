"""Points and flats of the geometry G(L/K).

A point is the class acl_K(x) of some x transcendental over K. There is no
canonical representative, so equality is the two-way closure test. Flats
are carried by generator lists; every query reduces to rank computations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

from .exact import RatFunc
from .pregeometry import ElementSet, ExtensionSpec, PreconditionError, in_closure, trdeg


class GeoPoint:
    __slots__ = ("rep", "spec")

    def __init__(self, rep: RatFunc, spec: ExtensionSpec):
        self.rep = rep
        self.spec = spec

    def __eq__(self, other):
        if not isinstance(other, GeoPoint):
            return NotImplemented
        if self.spec != other.spec:
            return False
        if self.rep == other.rep:
            return True
        return in_closure(self.spec, self.rep, [other.rep]) and in_closure(self.spec, other.rep, [self.rep])

    __hash__ = None  # equality is semantic; no hash is compatible with it

    def __repr__(self):
        return f"acl({self.spec.fmt(self.rep)})"


def point_of(spec: ExtensionSpec, x: RatFunc) -> GeoPoint:
    if trdeg(spec, [x]) != 1:
        raise PreconditionError(f"{spec.fmt(x)} is algebraic over K and is not a point")
    return GeoPoint(x, spec)


@dataclass(frozen=True)
class Flat:
    spec: ExtensionSpec
    gens: Tuple[RatFunc, ...]
    rank: int

    def __repr__(self):
        return f"Flat(rank={self.rank}, gens=[{', '.join(self.spec.fmt(g) for g in self.gens)}])"

    @property
    def kind(self) -> str:
        return {0: "empty", 1: "point", 2: "line", 3: "plane"}.get(self.rank, f"rank-{self.rank} flat")


def _reps(items) -> list:
    return [p.rep if isinstance(p, GeoPoint) else p for p in items]


def flat_of(spec: ExtensionSpec, gens: Iterable) -> Flat:
    gens = tuple(_reps(gens))
    return Flat(spec, gens, trdeg(spec, gens))


def flat_contains(f: Flat, p) -> bool:
    x = p.rep if isinstance(p, GeoPoint) else p
    return trdeg(f.spec, list(f.gens) + [x]) == f.rank


def flat_leq(f: Flat, g: Flat) -> bool:
    """acl(f) is contained in acl(g)."""
    return trdeg(g.spec, list(g.gens) + list(f.gens)) == g.rank


def flat_eq(f: Flat, g: Flat) -> bool:
    return f.rank == g.rank and flat_leq(f, g)


def flat_join(f: Flat, g: Flat) -> Flat:
    return flat_of(f.spec, list(f.gens) + list(g.gens))


# -- coordinate flats -----------------------------------------------------------

def coordinate_flat_intersection(A: Iterable[int], B: Iterable[int], spec: ExtensionSpec | None = None):
    """acl(A) meet acl(B) for sets of basis variables is acl(A & B)."""
    A, B = _coord_set(A, spec), _coord_set(B, spec)
    return tuple(sorted(A & B))


def _coord_set(vs, spec):
    out = set()
    for v in vs:
        if not isinstance(v, int) or isinstance(v, bool):
            raise PreconditionError(f"coordinate flats are given by variable indices, got {v!r}")
        if spec is not None:
            if not 1 <= v <= spec.nvars:
                raise PreconditionError(f"variable index {v} outside 1..{spec.nvars}")
            if v in spec.k_vars:
                raise PreconditionError(f"t{v} lies in K and does not generate a coordinate flat")
        out.add(v)
    return out


def coordinate_support(spec: ExtensionSpec, gens: ElementSet) -> Optional[Tuple[int, ...]]:
    """The variable set V with acl(gens) = acl(V), or None if acl(gens) is not a coordinate flat."""
    gens = list(gens)
    r = trdeg(spec, gens)
    support = tuple(v for v in spec.free_vars if in_closure(spec, spec.var(v), gens))
    return support if len(support) == r else None


def flat_of_vars(spec: ExtensionSpec, vs: Iterable[int]) -> Flat:
    vs = sorted(_coord_set(vs, spec))
    return Flat(spec, tuple(spec.var(v) for v in vs), len(vs))


def verify_intersection(f: Flat, g: Flat, claimed: Flat) -> Optional[bool]:
    """Check acl(f) & acl(g) == acl(claimed) as far as ranks allow.

    Returns True when ``claimed`` lies in both flats and its rank meets the
    submodular upper bound r(f) + r(g) - r(f v g) (which pins the
    intersection down), False when ``claimed`` is not contained in both, and
    None when containment holds but the bound is not attained, so the rank of
    the true intersection is not determined by ranks alone.
    """
    if not (flat_leq(claimed, f) and flat_leq(claimed, g)):
        return False
    bound = f.rank + g.rank - flat_join(f, g).rank
    if claimed.rank == bound:
        return True
    if claimed.rank > bound:
        return False  # cannot happen in a pregeometry; kept as a guard
    return None


# -- relative containment in a tower -------------------------------------------

@dataclass(frozen=True)
class Lemma34Result:
    agree: bool
    not_contained_small: bool
    not_contained_large: bool
    witness: Optional[RatFunc]

    def __bool__(self):
        return self.agree


def _not_contained(spec: ExtensionSpec, A, B):
    for a in A:
        if not in_closure(spec, a, list(B)):
            return True, a
    return False, None


def lemma34_check(spec1: ExtensionSpec, spec2: ExtensionSpec, A: ElementSet, B: ElementSet) -> Lemma34Result:
    """Compare "acl(A) & L1 not inside acl(B)" across L1 = Q(t1..tk) in L2 = Q(t1..tm).

    For finite A, B in L1 the set acl(A) & L is contained in acl(B) exactly
    when every element of A is, so each side is decided by closure tests run
    in its own field; a witness in A is returned when the answer is "not
    contained".
    """
    if spec1.nvars > spec2.nvars or spec1.k_vars != spec2.k_vars:
        raise PreconditionError("L1 must be a variable prefix of L2 over the same K")
    A, B = list(A), list(B)
    for x in A + B:
        if x.nvars != spec1.nvars:
            raise PreconditionError("A and B must be elements of L1")
    small, wit = _not_contained(spec1, A, B)
    up = lambda xs: [x.extend(spec2.nvars) for x in xs]
    large, _ = _not_contained(spec2, up(A), up(B))
    return Lemma34Result(small == large, small, large, wit)
