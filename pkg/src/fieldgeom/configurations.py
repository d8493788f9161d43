"""The definable sets Q, Q', J, the map j, the multiplication configuration,
and the formula psi, all evaluated against explicit witnesses."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exact import RatFunc
from .points import GeoPoint, flat_of, verify_intersection
from .pregeometry import ExtensionSpec, PreconditionError, in_closure, trdeg

JPOINT_NAMES = ("X", "P", "Q", "R", "A")


def is_generic_pair(spec: ExtensionSpec, x: RatFunc, y: RatFunc) -> bool:
    """(x, y) lies in (L minus K)^(2): both transcendental and jointly independent."""
    return trdeg(spec, [x, y]) == 2


def _pt(spec, x) -> GeoPoint:
    return GeoPoint(x, spec)


@dataclass
class JTuple:
    points: Tuple[GeoPoint, ...]
    witness_x: RatFunc
    witness_a: RatFunc

    @property
    def spec(self) -> ExtensionSpec:
        return self.points[0].spec

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        s = self.spec
        return f"j({s.fmt(self.witness_x)}, {s.fmt(self.witness_a)})"


def j_points(spec: ExtensionSpec, x: RatFunc, a: RatFunc) -> Tuple[GeoPoint, ...]:
    return tuple(_pt(spec, e) for e in (x, x + a, x * a, x + x * a, a))


def j_map(spec: ExtensionSpec, x: RatFunc, a: RatFunc) -> JTuple:
    """j(x, a) = (acl x, acl(x+a), acl(xa), acl(x+xa), acl a)."""
    if not is_generic_pair(spec, x, a):
        raise PreconditionError(f"({spec.fmt(x)}, {spec.fmt(a)}) is not an independent pair")
    return JTuple(j_points(spec, x, a), x, a)


def _points_equal(ps: Sequence[GeoPoint], qs: Sequence[GeoPoint]) -> bool:
    return len(ps) == len(qs) and all(p == q for p, q in zip(ps, qs))


def q_tuple(spec, x, y):
    return tuple(_pt(spec, e) for e in (x, y, x + y, x / y))


def qprime_tuple(spec, x, y):
    return tuple(_pt(spec, e) for e in (x, y, x + y, x * y))


def q_membership(tup: Sequence[GeoPoint], witness: Tuple[RatFunc, RatFunc]) -> bool:
    """Whether ``tup`` equals (acl x, acl y, acl(x+y), acl(x/y)) for the witness pair."""
    spec = tup[0].spec
    x, y = witness
    if not is_generic_pair(spec, x, y):
        return False
    return _points_equal(tup, q_tuple(spec, x, y))


def qprime_membership(tup: Sequence[GeoPoint], witness: Tuple[RatFunc, RatFunc]) -> bool:
    """Whether ``tup`` equals (acl x, acl y, acl(x+y), acl(xy)) for the witness pair."""
    spec = tup[0].spec
    x, y = witness
    if not is_generic_pair(spec, x, y):
        return False
    return _points_equal(tup, qprime_tuple(spec, x, y))


def q_second_presentation(spec: ExtensionSpec, x: RatFunc, z: RatFunc):
    """(acl x, acl(xz), acl(xz + x), acl z): the other description of Q."""
    return tuple(_pt(spec, e) for e in (x, x * z, x * z + x, z))


def mult_construct(X: GeoPoint, Y: GeoPoint, V: GeoPoint, x: RatFunc, y: RatFunc) -> GeoPoint:
    """From acl x, acl y, acl(x/y) (with witnesses) produce acl(xy).

    The inputs are checked to form the Q-tuple (X, Y, acl(x+y), V) and the
    output is checked to complete the Q'-tuple (X, Y, acl(x+y), result).
    """
    spec = X.spec
    if not is_generic_pair(spec, x, y):
        raise PreconditionError("witnesses must be an independent pair")
    S = _pt(spec, x + y)
    if not q_membership((X, Y, S, V), (x, y)):
        raise PreconditionError("(X, Y, acl(x+y), V) is not in Q for the given witnesses")
    E = _pt(spec, x * y)
    if not qprime_membership((X, Y, S, E), (x, y)):
        raise AssertionError("constructed product point does not complete a Q' tuple")
    return E


@dataclass(frozen=True)
class JMembership:
    witness_path: Optional[bool]
    decomposition_path: bool

    @property
    def agree(self) -> bool:
        return self.witness_path is None or self.witness_path == self.decomposition_path

    def __bool__(self):
        return self.decomposition_path if self.witness_path is None else self.witness_path


def _decomposition(tup: Sequence[GeoPoint], x: RatFunc, a: RatFunc) -> bool:
    X, P, Q, R, A = tup
    return (
        q_membership((X, Q, R, A), (x, x * a))
        and qprime_membership((X, A, P, Q), (x, a))
        and qprime_membership((X, A, P, R), (x, a + 1))
    )


def j_membership(tup, witness: Optional[Tuple[RatFunc, RatFunc]] = None) -> JMembership:
    """Membership of a 5-tuple in J = Im(j).

    The witness path compares against j(x, a) directly. The decomposition
    path checks (X,Q,R,A) in Q, (X,A,P,Q) in Q' and (X,A,P,R) in Q', with
    witnesses rebuilt from the tuple itself: a JTuple's stored (x, a), or the
    representatives of its first and last points.
    """
    if isinstance(tup, JTuple):
        prov = (tup.witness_x, tup.witness_a)
        pts = tup.points
    else:
        pts = tuple(tup)
        if len(pts) != 5 or not all(isinstance(p, GeoPoint) for p in pts):
            raise PreconditionError("need five GeoPoints (or a JTuple)")
        prov = (pts[0].rep, pts[4].rep)
    spec = pts[0].spec
    wpath = None
    if witness is not None:
        x, a = witness
        wpath = is_generic_pair(spec, x, a) and _points_equal(pts, j_points(spec, x, a))
    x, a = prov
    dpath = is_generic_pair(spec, x, a) and _decomposition(pts, x, a)
    return JMembership(wpath, dpath)


# -- psi ------------------------------------------------------------------------------

PSI_SLOTS = ("A1", "A2", "B1", "B2", "C1", "C2", "D", "E", "F", "G", "H", "I",
             "P", "Q", "R", "S", "T", "U", "X", "Y", "Z")


@dataclass
class PsiInstance:
    spec: ExtensionSpec
    points: Dict[str, GeoPoint]

    def __post_init__(self):
        missing = [s for s in PSI_SLOTS if s not in self.points]
        if missing:
            raise PreconditionError(f"psi instance is missing slots {missing}")
        for s, p in self.points.items():
            if trdeg(self.spec, [p.rep]) != 1:
                raise PreconditionError(f"slot {s} is not a point")

    def __getitem__(self, name) -> RatFunc:
        return self.points[name].rep

    def replace(self, **reps: RatFunc) -> "PsiInstance":
        pts = dict(self.points)
        for k, v in reps.items():
            pts[k] = GeoPoint(v, self.spec)
        return PsiInstance(self.spec, pts)


def build_psi_instance(spec: ExtensionSpec, a, b, c, d, x) -> PsiInstance:
    """A psi-configuration over an independent 5-set with (P, D, Y, I) = (b, ax, ax+b, ax/b).

    A = acl(a, b), B = acl(c, d), C = acl(ac, cb+d); the transversal S, T, U is
    a, c, ac, and the remaining points are forced by the intersection
    conjuncts.
    """
    if trdeg(spec, [a, b, c, d, x]) != 5:
        raise PreconditionError("a, b, c, d, x must be independent over K")
    y = a * x + b
    reps = {
        "A1": a, "A2": b, "B1": c, "B2": d, "C1": a * c, "C2": c * b + d,
        "D": a * x, "E": c * y, "F": a * c * x, "G": b * c, "H": a / b, "I": a * x / b,
        "P": b, "Q": d, "R": c * b + d, "S": a, "T": c, "U": a * c,
        "X": x, "Y": y, "Z": c * y + d,
    }
    return PsiInstance(spec, {k: GeoPoint(v, spec) for k, v in reps.items()})


def sample_flat_points(spec: ExtensionSpec, u: RatFunc, v: RatFunc, rng: random.Random, k: int = 8) -> List[RatFunc]:
    """Seeded points of the line acl(u, v)."""
    out = [u, v]
    templates = [
        lambda p, q: u * p + v * q,
        lambda p, q: u * v * p + q,
        lambda p, q: u * p / (v + q),
        lambda p, q: u ** 2 * p + v * q,
        lambda p, q: (u + p) * (v + q),
        lambda p, q: u * p + v ** 2 * q,
        lambda p, q: v * p / u + q,
    ]
    guard = 0
    while len(out) < k and guard < 20 * k:
        guard += 1
        p = Fraction(rng.choice([x for x in range(-4, 5) if x]))
        q = Fraction(rng.choice([x for x in range(-4, 5) if x]))
        w = rng.choice(templates)(p, q)
        if trdeg(spec, [w]) == 1 and all(w != o for o in out):
            out.append(w)
    return out[:k]


@dataclass
class PsiReport:
    results: Dict[str, str] = field(default_factory=dict)
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def failed(self) -> List[str]:
        return [k for k, v in self.results.items() if v in ("fail", "undetermined")]

    @property
    def passed(self) -> bool:
        return not self.failed


def psi_check(
    inst: PsiInstance,
    rng: random.Random | None = None,
    samples: int = 8,
    partial_quadrangle: Optional[Callable[[PsiInstance], bool]] = None,
) -> PsiReport:
    """Evaluate each conjunct of psi as rank and closure predicates.

    The universally quantified conjunct is checked on ``samples`` seeded
    points of each of A, B, C and reported as ``sampled``. The
    partial-quadrangle conjunct is delegated to ``partial_quadrangle`` and
    reported as ``skipped`` when none is given.
    """
    rng = rng or random.Random(0)
    spec = inst.spec
    g = inst.__getitem__
    A = [g("A1"), g("A2")]
    B = [g("B1"), g("B2")]
    C = [g("C1"), g("C2")]
    rep = PsiReport()

    def tr(*groups):
        return trdeg(spec, [e for grp in groups for e in grp])

    def mark(name, ok, note=""):
        rep.results[name] = "pass" if ok else "fail"
        if note:
            rep.details[name] = note

    ranks = (tr(A, B, C), tr(A, B), tr(B, C), tr(A, C))
    mark("trdeg_ABC_AB_BC_AC_eq_4", all(r == 4 for r in ranks), f"ranks {ranks}")

    X, Y, Z = g("X"), g("Y"), g("Z")
    ok = in_closure(spec, X, A + [Y])
    ok = ok and in_closure(spec, Z, B + [Y]) and in_closure(spec, Z, C + [X])
    ok = ok and not any(in_closure(spec, w, A + B + C) for w in (X, Y, Z))
    mark("XYZ_incidences", ok)

    sA = sample_flat_points(spec, *A, rng, samples)
    sB = sample_flat_points(spec, *B, rng, samples)
    sC = sample_flat_points(spec, *C, rng, samples)
    ok = all(not in_closure(spec, X, [a1, Y]) for a1 in sA)
    ok = ok and all(not in_closure(spec, Z, [b1, Y]) for b1 in sB)
    ok = ok and all(not in_closure(spec, Z, [c1, X]) for c1 in sC)
    rep.results["XYZ_generic_position"] = "sampled" if ok else "fail"
    rep.details["XYZ_generic_position"] = f"{len(sA)}+{len(sB)}+{len(sC)} sampled flat points"

    S, T, U = g("S"), g("T"), g("U")
    ok = in_closure(spec, S, A) and in_closure(spec, T, B) and in_closure(spec, U, C)
    mark("STU_transversal", ok and trdeg(spec, [S, T, U]) == 2)

    if partial_quadrangle is None:
        rep.results["partial_quadrangle"] = "skipped"
    else:
        mark("partial_quadrangle", bool(partial_quadrangle(inst)))

    def inter(name, f1, f2, target):
        res = verify_intersection(flat_of(spec, f1), flat_of(spec, f2), flat_of(spec, target))
        if res is None:
            rep.results[name] = "undetermined"
        else:
            mark(name, res)

    inter("PY_meet_SX_is_D", [g("P"), Y], [S, X], [g("D")])
    inter("TY_meet_QZ_is_E", [T, Y], [g("Q"), Z], [g("E")])
    inter("UX_meet_TD_is_F", [U, X], [T, g("D")], [g("F")])
    inter("PT_meet_QR_is_G", [g("P"), T], [g("Q"), g("R")], [g("G")])
    inter("HX_meet_PY_is_I", [g("H"), X], [g("P"), Y], [g("I")])
    inter("UG_meet_A_is_H", [U, g("G")], A, [g("H")])
    inter("FZ_meet_C_is_R", [g("F"), Z], C, [g("R")])
    return rep
