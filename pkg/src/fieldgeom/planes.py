"""Projective planes: P(Q) in homogeneous coordinates and the planes of G(L/K)
spanned by an anchor triple, in additive and multiplicative form."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import RatFunc
from .points import GeoPoint, point_of
from .pregeometry import ExtensionSpec, PreconditionError, in_closure, trdeg


class DegenerateConfiguration(ValueError):
    pass


# -- P(Q) -----------------------------------------------------------------------

@dataclass(frozen=True)
class ProjPoint:
    """A point of P(Q); equality is up to a nonzero scalar."""

    coords: Tuple[Fraction, Fraction, Fraction]

    def __init__(self, *coords):
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction)):
            coords = tuple(coords[0])
        if len(coords) != 3:
            raise ValueError("projective plane points need three coordinates")
        cs = tuple(Fraction(c) for c in coords)
        if not any(cs):
            raise ValueError("(0, 0, 0) is not a projective point")
        lead = next(c for c in cs if c)
        object.__setattr__(self, "coords", tuple(c / lead for c in cs))

    def __iter__(self):
        return iter(self.coords)

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


def cross(u: Sequence, v: Sequence) -> Tuple[Fraction, Fraction, Fraction]:
    return (
        Fraction(u[1]) * v[2] - Fraction(u[2]) * v[1],
        Fraction(u[2]) * v[0] - Fraction(u[0]) * v[2],
        Fraction(u[0]) * v[1] - Fraction(u[1]) * v[0],
    )


def det3(u, v, w) -> Fraction:
    c = cross(v, w)
    return Fraction(u[0]) * c[0] + Fraction(u[1]) * c[1] + Fraction(u[2]) * c[2]


def dot(u, v) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0))


def join(p, q) -> ProjPoint:
    """The line through two distinct points, as a dual coordinate vector."""
    c = cross(tuple(p), tuple(q))
    if not any(c):
        raise DegenerateConfiguration(f"{p} and {q} coincide; no unique line")
    return ProjPoint(c)


def meet(l1, l2) -> ProjPoint:
    c = cross(tuple(l1), tuple(l2))
    if not any(c):
        raise DegenerateConfiguration(f"lines {l1} and {l2} coincide")
    return ProjPoint(c)


def incident(p, line) -> bool:
    return dot(tuple(p), tuple(line)) == 0


def rank_of(vectors) -> int:
    rows = [list(map(Fraction, v)) for v in vectors]
    r = 0
    for c in range(3):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


# -- planes inside G(L/K) ----------------------------------------------------------

@dataclass(frozen=True)
class PlaneAnchor:
    spec: ExtensionSpec
    x: RatFunc
    y: RatFunc
    z: RatFunc
    mode: str = "additive"

    def __post_init__(self):
        if self.mode not in ("additive", "multiplicative"):
            raise ValueError(f"unknown plane mode {self.mode!r}")
        if trdeg(self.spec, [self.x, self.y, self.z]) != 3:
            raise PreconditionError("anchor elements must be independent over K")

    def element(self, v) -> RatFunc:
        if self.mode == "additive":
            a, b, c = (Fraction(t) for t in v)
            if not (a or b or c):
                raise ValueError("zero coefficient vector")
            return self.x * a + self.y * b + self.z * c
        a, b, c = v
        if any(Fraction(t).denominator != 1 for t in v):
            raise ValueError("multiplicative planes take integer exponent vectors")
        a, b, c = int(a), int(b), int(c)
        if not (a or b or c):
            raise ValueError("zero exponent vector")
        return self.x ** a * self.y ** b * self.z ** c


def plane_point(anchor: PlaneAnchor, v) -> GeoPoint:
    return GeoPoint(anchor.element(tuple(v)), anchor.spec)


def collinear(p: GeoPoint, q: GeoPoint, r: GeoPoint) -> bool:
    return trdeg(p.spec, [p.rep, q.rep, r.rep]) <= 2


def coordinatization_check(anchor: PlaneAnchor, vs: Sequence) -> bool:
    """Linear dependence of the coefficient vectors <=> collinearity of their points."""
    if len(vs) != 3:
        raise ValueError("need exactly three coefficient vectors")
    dependent = det3(*[tuple(v) for v in vs]) == 0
    pts = [plane_point(anchor, v) for v in vs]
    return dependent == collinear(*pts)


def frame_family() -> List[ProjPoint]:
    """The 13 points of P(Q) with coordinates in {-1, 0, 1} up to sign."""
    seen = []
    for v in itertools.product((-1, 0, 1), repeat=3):
        if any(v):
            p = ProjPoint(v)
            if p not in seen:
                seen.append(p)
    return seen


@dataclass
class MaximalityReport:
    candidates: int = 0
    compatible: int = 0
    confirmed: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.compatible == self.confirmed


def maximality_probe(anchor: PlaneAnchor, candidates: Sequence[RatFunc], lines_from=None) -> MaximalityReport:
    """Every candidate of acl(x, y, z) lying on two distinct plane lines is a plane point.

    Plane lines are taken through pairs of points of ``lines_from`` (default:
    :func:`frame_family`). For a compatible candidate the expected point is
    the intersection of the two lines computed in P(Q); the check is that the
    candidate is the same point of G(L/K).
    """
    if anchor.mode != "additive":
        raise PreconditionError("the maximality probe concerns the additive plane")
    spec = anchor.spec
    base = lines_from or frame_family()
    lines: Dict[ProjPoint, Tuple[ProjPoint, ProjPoint]] = {}
    for p, q in itertools.combinations(base, 2):
        lines.setdefault(join(p, q), (p, q))
    span = [anchor.x, anchor.y, anchor.z]
    rep = MaximalityReport()
    for w in candidates:
        if trdeg(spec, [w]) != 1 or not in_closure(spec, w, span):
            raise PreconditionError(f"candidate {spec.fmt(w)} is not a point of the anchor plane flat")
        rep.candidates += 1
        on = [
            line for line, (p, q) in lines.items()
            if trdeg(spec, [anchor.element(p), anchor.element(q), w]) <= 2
        ]
        if len(on) < 2:
            continue
        rep.compatible += 1
        expected = meet(on[0], on[1])
        ok = GeoPoint(w, spec) == plane_point(anchor, expected)
        # every further line through w must pass through the same P(Q) point
        ok = ok and all(incident(expected, line) for line in on[2:])
        if ok:
            rep.confirmed += 1
        else:
            rep.failures.append(spec.fmt(w))
    return rep


# -- axioms ------------------------------------------------------------------------

@dataclass
class AxiomReport:
    axioms: Dict[str, bool]
    witnesses: Dict[str, list]

    @property
    def passed(self) -> bool:
        return all(self.axioms.values())


def plane_axioms_check(sample: Sequence, anchor: Optional[PlaneAnchor] = None) -> AxiomReport:
    """Verify the four projective-plane axioms on a finite sample of P(Q).

    Axiom 3 is witnessed by p + q on the line through p and q; axiom 4 by
    the cross product of two line vectors. With an anchor, every witness is
    also checked inside G(L/K).
    """
    pts = []
    for s in sample:
        p = s if isinstance(s, ProjPoint) else ProjPoint(s)
        if p not in pts:
            pts.append(p)
    wit: Dict[str, list] = {"rank": [], "noncollinear": [], "third_point": [], "meet": []}
    r = rank_of([p.coords for p in pts]) if pts else 0
    ax1 = r == 3
    wit["rank"].append(r)
    triple = next(
        (t for t in itertools.combinations(pts, 3) if det3(*(p.coords for p in t)) != 0), None
    )
    ax2 = triple is not None
    if triple:
        wit["noncollinear"].append(list(triple))
        if anchor is not None:
            ax2 = ax2 and not collinear(*(plane_point(anchor, p) for p in triple))
    ax3 = True
    lines = {}
    for p, q in itertools.combinations(pts, 2):
        third = ProjPoint(tuple(a + b for a, b in zip(p.coords, q.coords))) if any(
            a + b for a, b in zip(p.coords, q.coords)
        ) else ProjPoint(tuple(a - b for a, b in zip(p.coords, q.coords)))
        line = join(p, q)
        lines.setdefault(line, (p, q))
        ok = third not in (p, q) and incident(third, line)
        if ok and anchor is not None:
            gp, gq, gt = (plane_point(anchor, v) for v in (p, q, third))
            ok = collinear(gp, gq, gt) and gt != gp and gt != gq
        ax3 = ax3 and ok
        wit["third_point"].append([p, q, third])
    ax4 = True
    for (l1, (p1, q1)), (l2, (p2, q2)) in itertools.combinations(lines.items(), 2):
        m = meet(l1, l2)
        ok = incident(m, l1) and incident(m, l2)
        if ok and anchor is not None:
            gm = plane_point(anchor, m)
            ok = collinear(plane_point(anchor, p1), plane_point(anchor, q1), gm) and collinear(
                plane_point(anchor, p2), plane_point(anchor, q2), gm
            )
        ax4 = ax4 and ok
        wit["meet"].append([l1, l2, m])
    return AxiomReport({"rank3": ax1, "noncollinear_triple": ax2, "three_points_per_line": ax3,
                        "lines_meet": ax4}, wit)


# -- Desargues ----------------------------------------------------------------------

@dataclass(frozen=True)
class DesarguesConfig:
    center: ProjPoint
    tri1: Tuple[ProjPoint, ProjPoint, ProjPoint]
    tri2: Tuple[ProjPoint, ProjPoint, ProjPoint]


@dataclass
class DesarguesResult:
    holds: bool
    axis_points: List[ProjPoint]
    lifted: Optional[bool] = None


def _validate(cfg: DesarguesConfig):
    O, A, B = cfg.center, cfg.tri1, cfg.tri2
    allpts = [O, *A, *B]
    for p, q in itertools.combinations(allpts, 2):
        if p == q:
            raise DegenerateConfiguration(f"coincident points {p}")
    for tri in (A, B):
        if det3(*(p.coords for p in tri)) == 0:
            raise DegenerateConfiguration(f"triangle {tri} is collinear")
    for a, b in zip(A, B):
        if det3(O.coords, a.coords, b.coords) != 0:
            raise DegenerateConfiguration(f"{a}, {b} not perspective from {O}")
    for i, j in itertools.combinations(range(3), 2):
        la, lb = join(A[i], A[j]), join(B[i], B[j])
        if la == lb:
            raise DegenerateConfiguration(f"corresponding sides {i}{j} coincide")
        if incident(O, la) or incident(O, lb):
            raise DegenerateConfiguration(f"center lies on side {i}{j}")


def desargues_result(cfg: DesarguesConfig, anchor: Optional[PlaneAnchor] = None) -> DesarguesResult:
    _validate(cfg)
    A, B = cfg.tri1, cfg.tri2
    axis = [meet(join(A[i], A[j]), join(B[i], B[j])) for i, j in ((0, 1), (1, 2), (0, 2))]
    holds = rank_of([p.coords for p in axis]) <= 2
    lifted = None
    if anchor is not None:
        g = lambda p: plane_point(anchor, p)
        O = g(cfg.center)
        lifted = all(collinear(O, g(a), g(b)) for a, b in zip(A, B))
        for (i, j), ax in zip(((0, 1), (1, 2), (0, 2)), axis):
            lifted = lifted and collinear(g(A[i]), g(A[j]), g(ax)) and collinear(g(B[i]), g(B[j]), g(ax))
        distinct = len(set(axis)) == 3
        if distinct:
            lifted = lifted and collinear(*(g(p) for p in axis))
    return DesarguesResult(holds, axis, lifted)


def desargues_check(cfg: DesarguesConfig, anchor: Optional[PlaneAnchor] = None) -> bool:
    res = desargues_result(cfg, anchor)
    return res.holds and res.lifted is not False


def random_desargues_config(rng: random.Random, box: int = 9, tries: int = 1000) -> DesarguesConfig:
    def rv():
        return tuple(rng.randint(-box, box) for _ in range(3))

    for _ in range(tries):
        try:
            O = ProjPoint(rv())
            A = tuple(ProjPoint(rv()) for _ in range(3))
            B = []
            for a in A:
                s = rng.choice([x for x in range(-box, box + 1) if x])
                u = rng.choice([x for x in range(-box, box + 1) if x])
                B.append(ProjPoint(tuple(s * o + u * c for o, c in zip(O.coords, a.coords))))
            cfg = DesarguesConfig(O, A, tuple(B))
            _validate(cfg)
            return cfg
        except (ValueError, DegenerateConfiguration):
            continue
    raise RuntimeError("could not generate a nondegenerate Desargues configuration")


# -- rigidity verifiers (forward direction) --------------------------------------------------------

def _same_point(spec, u, v) -> bool:
    return GeoPoint(u, spec) == GeoPoint(v, spec)


def lemma11_additive(spec: ExtensionSpec, xs: Sequence[RatFunc], c, c_prime, ds: Sequence[RatFunc]) -> bool:
    """Build x'_i = (c/c') x_i + d_i/c' and confirm every closure equality of the hypothesis."""
    c, c_prime = Fraction(c), Fraction(c_prime)
    if not c or not c_prime:
        raise PreconditionError("c and c' must be nonzero")
    xs = list(xs)
    ds = [d if isinstance(d, RatFunc) else spec.const(d) for d in ds]
    if len(xs) != 3 or len(ds) != 3:
        raise PreconditionError("need three elements and three shifts")
    for d in ds:
        if trdeg(spec, [d]) != 0 or not d.variables() <= {s - 1 for s in spec.k_vars}:
            raise PreconditionError("shifts must lie in K")
    if trdeg(spec, xs) != 3:
        raise PreconditionError("x1, x2, x3 must be independent over K")
    xp = [x * (c / c_prime) + d * (1 / c_prime) for x, d in zip(xs, ds)]
    ok = trdeg(spec, xp) == 3
    ok = ok and all(x2 * c_prime == x1 * c + d for x1, x2, d in zip(xs, xp, ds))
    ok = ok and all(_same_point(spec, a, b) for a, b in zip(xs, xp))
    ok = ok and _same_point(spec, xs[0] + xs[1], xp[0] + xp[1])
    ok = ok and _same_point(spec, xs[0] + xs[2], xp[0] + xp[2])
    return ok


def _rational_root(q: Fraction, m: int) -> Optional[Fraction]:
    m = abs(m)
    q = Fraction(q)
    if q < 0 and m % 2 == 0:
        return None
    sign = -1 if q < 0 else 1

    def iroot(n):
        r = round(abs(n) ** (1.0 / m))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** m == abs(n):
                return cand
        return None

    a, b = iroot(q.numerator), iroot(q.denominator)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


def lemma11_multiplicative(spec: ExtensionSpec, us: Sequence[RatFunc], n: int, m: int, a, b) -> bool:
    """With x_i = u_i^m and x'_i chosen so that x_1^n = a x'_1^m, x_2^n = b x'_2^m,
    confirm acl(x_i) = acl(x'_i) and acl(x_1 x_2) = acl(x'_1 x'_2)."""
    if not n or not m:
        raise PreconditionError("n and m must be nonzero")
    a, b = Fraction(a), Fraction(b)
    if not a or not b:
        raise PreconditionError("a and b must be nonzero")
    us = list(us)
    if len(us) != 2 or trdeg(spec, us) != 2:
        raise PreconditionError("need an independent pair")
    xs = [u ** m for u in us]
    scales = []
    for k in (a, b):
        r = _rational_root(1 / k, m)
        if r is None:
            raise PreconditionError(f"1/{k} has no rational {m}-th root; choose another constant")
        scales.append(r)
    xp = [u ** n * s for u, s in zip(us, scales)]
    ok = trdeg(spec, xp) == 2
    ok = ok and xs[0] ** n == xp[0] ** m * a and xs[1] ** n == xp[1] ** m * b
    ok = ok and all(_same_point(spec, x, y) for x, y in zip(xs, xp))
    ok = ok and _same_point(spec, xs[0] * xs[1], xp[0] * xp[1])
    return ok


def lemma11_verify(case: str, spec: ExtensionSpec, **witnesses) -> bool:
    if case == "additive":
        return lemma11_additive(spec, **witnesses)
    if case == "multiplicative":
        return lemma11_multiplicative(spec, **witnesses)
    raise ValueError(f"unknown case {case!r}")
