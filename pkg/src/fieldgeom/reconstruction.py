"""Interpreting the field inside G(L/K) and recovering field maps from
geometry maps.

Fix an anchor a outside K. The class J1 = {j(x, a)} carries generic
operations with j(x,a) (+) j(x',a) = j(x+x', a) and j(x,a) (.) j(x',a) = j(xx', a).
Pairs of members up to equal ratio x1/x2, plus a zero class, form a field
and ``mu`` maps it onto L.

A geometry map F is transported through j-tuples: F(j(x, a)) = j(y, b), and
the field map is read off as ratios of the recovered y's.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .configurations import JTuple, is_generic_pair, j_map, j_membership
from .exact import RatFunc
from .points import GeoPoint, flat_of, verify_intersection
from .pregeometry import ExtensionSpec, PreconditionError, in_closure, trdeg


class AnchorMismatch(ValueError):
    pass


class RecoveryError(RuntimeError):
    pass


def _require_generic_triple(spec, x, y, a):
    if trdeg(spec, [x, y, a]) != 3:
        raise PreconditionError(
            f"{spec.fmt(x)}, {spec.fmt(y)}, {spec.fmt(a)} are not independent; operation undefined"
        )


def _same_anchor(u: JTuple, v: JTuple):
    if u.witness_a != v.witness_a:
        raise AnchorMismatch(f"anchors {u.witness_a} and {v.witness_a} differ")


def oplus(u: JTuple, v: JTuple) -> JTuple:
    _same_anchor(u, v)
    _require_generic_triple(u.spec, u.witness_x, v.witness_x, u.witness_a)
    return j_map(u.spec, u.witness_x + v.witness_x, u.witness_a)


def odot(u: JTuple, v: JTuple) -> JTuple:
    _same_anchor(u, v)
    _require_generic_triple(u.spec, u.witness_x, v.witness_x, u.witness_a)
    return j_map(u.spec, u.witness_x * v.witness_x, u.witness_a)


@dataclass
class J1Class:
    """The members j(x, a) for a fixed anchor a."""

    spec: ExtensionSpec
    anchor: RatFunc

    def __post_init__(self):
        self.spec.require_trdeg(5, "field interpretation")
        if trdeg(self.spec, [self.anchor]) != 1:
            raise PreconditionError("anchor must be transcendental over K")

    def member(self, x: RatFunc) -> JTuple:
        return j_map(self.spec, x, self.anchor)

    def contains(self, u: JTuple) -> bool:
        return u.witness_a == self.anchor and bool(j_membership(u))

    def ratio(self, x1: RatFunc, x2: RatFunc) -> "RatioClass":
        return RatioClass(self.member(x1), self.member(x2))

    def zero(self) -> "RatioClass":
        return RatioClass(None, None, anchor=self.anchor, spec=self.spec)


@dataclass
class RatioClass:
    """[j(x1, a), j(x2, a)] up to equal ratio, or the zero class (num is None)."""

    num: Optional[JTuple]
    den: Optional[JTuple]
    anchor: Optional[RatFunc] = None
    spec: Optional[ExtensionSpec] = None

    def __post_init__(self):
        if self.num is not None:
            _same_anchor(self.num, self.den)
            self.anchor = self.num.witness_a
            self.spec = self.num.spec
        elif self.anchor is None or self.spec is None:
            raise ValueError("the zero class needs its anchor and extension")

    @property
    def is_zero(self) -> bool:
        return self.num is None

    def equiv(self, other: "RatioClass") -> bool:
        if self.anchor != other.anchor:
            raise AnchorMismatch("ratio classes over different anchors")
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        # x1/x2 = y1/y2, compared without forming mu
        return self.num.witness_x * other.den.witness_x == other.num.witness_x * self.den.witness_x

    def __repr__(self):
        if self.is_zero:
            return "0_="
        return f"[{self.num}, {self.den}]"


def mu(p: RatioClass) -> RatFunc:
    if p.is_zero:
        return RatFunc.const(0, p.spec.nvars)
    return p.num.witness_x / p.den.witness_x


def _generic(spec, a, *pairs) -> bool:
    return all(trdeg(spec, [x, y, a]) == 3 for x, y in pairs)


def _rebase(p: RatioClass, w: RatFunc) -> RatioClass:
    wj = j_map(p.spec, w, p.anchor)
    return RatioClass(odot(p.num, wj), odot(p.den, wj))


def _rebasings(p: RatioClass, pool: Sequence[RatFunc]):
    yield p
    a = p.anchor
    for w in pool:
        if _generic(p.spec, a, (p.num.witness_x, w), (p.den.witness_x, w)):
            yield _rebase(p, w)


def _helper_pool(spec: ExtensionSpec, anchor: RatFunc) -> List[RatFunc]:
    vs = [spec.var(i) for i in spec.free_vars]
    pool = list(vs) + [u * v for u, v in itertools.combinations(vs, 2)]
    return [w for w in pool if not in_closure(spec, w, [anchor])]


def _check_pair(p: RatioClass, q: RatioClass):
    if p.anchor != q.anchor:
        raise AnchorMismatch("ratio classes over different anchors")


def ratio_mul(p: RatioClass, q: RatioClass) -> RatioClass:
    """[j(x1), j(x2)] . [j(y1), j(y2)] = [j(x1) (.) j(y1), j(x2) (.) j(y2)], rebasing q if needed."""
    _check_pair(p, q)
    if p.is_zero or q.is_zero:
        return RatioClass(None, None, anchor=p.anchor, spec=p.spec)
    a, spec = p.anchor, p.spec
    pool = _helper_pool(spec, a)
    for q2 in _rebasings(q, pool):
        if _generic(spec, a, (p.num.witness_x, q2.num.witness_x), (p.den.witness_x, q2.den.witness_x)):
            return RatioClass(odot(p.num, q2.num), odot(p.den, q2.den))
    raise RecoveryError("no generic representative found for the product")


def ratio_add(p: RatioClass, q: RatioClass) -> RatioClass:
    """Sum over a common denominator: [x1 y2 (+) x2 y1, x2 y2]."""
    _check_pair(p, q)
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    a, spec = p.anchor, p.spec
    pool = _helper_pool(spec, a)
    for p2 in _rebasings(p, pool):
        for q2 in _rebasings(q, pool):
            x1, x2 = p2.num.witness_x, p2.den.witness_x
            y1, y2 = q2.num.witness_x, q2.den.witness_x
            if not _generic(spec, a, (x1, y2), (x2, y1), (x2, y2)):
                continue
            n1 = odot(p2.num, q2.den)
            n2 = odot(p2.den, q2.num)
            if n1.witness_x == -n2.witness_x:
                return RatioClass(None, None, anchor=a, spec=spec)
            if not _generic(spec, a, (n1.witness_x, n2.witness_x)):
                continue
            return RatioClass(oplus(n1, n2), odot(p2.den, q2.den))
    raise RecoveryError("no generic representatives found for the sum")


# -- geometry maps ------------------------------------------------------------------

class GeometryMap:
    """A point map G(L/K) -> G(L'/K') used as a black box."""

    def __init__(self, source: ExtensionSpec, target: ExtensionSpec, fn: Callable[[GeoPoint], GeoPoint], name=""):
        self.source = source
        self.target = target
        self._fn = fn
        self.name = name

    def __call__(self, p: GeoPoint) -> GeoPoint:
        if p.spec != self.source:
            raise ValueError("point does not belong to the source geometry")
        return self._fn(p)


class SubstitutionMap(GeometryMap):
    """The geometry automorphism induced by t_i -> images[i] (a field automorphism over K)."""

    def __init__(self, spec: ExtensionSpec, images: Sequence[RatFunc], name=""):
        self.images = tuple(images)
        if len(self.images) != spec.nvars:
            raise ValueError("need one image per variable")
        for s in spec.k_vars:
            if self.images[s - 1] != spec.var(s):
                raise PreconditionError(f"substitution must fix t{s} in K")
        if trdeg(spec, [self.images[i - 1] for i in spec.free_vars]) != spec.trdeg_L:
            raise PreconditionError("substitution images are not independent")
        super().__init__(spec, spec, lambda p: GeoPoint(self.field_map(p.rep), spec), name)

    def field_map(self, x: RatFunc) -> RatFunc:
        return x.compose(self.images)


def permutation_map(spec: ExtensionSpec, perm: Dict[int, int]) -> SubstitutionMap:
    """t_i -> t_perm[i] (1-based), identity elsewhere."""
    images = [spec.var(perm.get(i, i)) for i in range(1, spec.nvars + 1)]
    return SubstitutionMap(spec, images, f"perm{sorted(perm.items())}")


def affine_map(spec: ExtensionSpec, i: int, alpha, beta) -> SubstitutionMap:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not alpha:
        raise PreconditionError("alpha must be nonzero")
    images = [spec.var(k) for k in range(1, spec.nvars + 1)]
    images[i - 1] = spec.var(i) * alpha + beta
    return SubstitutionMap(spec, images, f"t{i}->{spec.fmt(images[i - 1])}")


def mobius_map(spec: ExtensionSpec, i: int, alpha, beta, gamma, delta) -> SubstitutionMap:
    alpha, beta, gamma, delta = map(Fraction, (alpha, beta, gamma, delta))
    if alpha * delta - beta * gamma == 0:
        raise PreconditionError("Mobius coefficients must have nonzero determinant")
    images = [spec.var(k) for k in range(1, spec.nvars + 1)]
    t = spec.var(i)
    images[i - 1] = (t * alpha + beta) / (t * gamma + delta)
    return SubstitutionMap(spec, images, f"t{i}->{spec.fmt(images[i - 1])}")


def identity_map(spec: ExtensionSpec) -> SubstitutionMap:
    return SubstitutionMap(spec, [spec.var(k) for k in range(1, spec.nvars + 1)], "identity")


def check_rank_preservation(F: GeometryMap, points: Sequence[GeoPoint]) -> bool:
    src = trdeg(F.source, [p.rep for p in points])
    dst = trdeg(F.target, [F(p).rep for p in points])
    return src == dst


# -- recovering the field map -----------------------------------------------------------

def transport_j(F: GeometryMap, u: JTuple) -> JTuple:
    """F(j(x, a)) as j(y, b), with (y, b) read from the image points and verified."""
    img = tuple(F(p) for p in u.points)
    if trdeg(F.target, [p.rep for p in img]) != 2:
        raise RecoveryError(f"F does not preserve rank on {u}")
    y, b = img[0].rep, img[4].rep
    if not is_generic_pair(F.target, y, b) or not j_membership(img, (y, b)).witness_path:
        raise RecoveryError(f"image of {u} is not recognised as j(y, b) from its representatives")
    return JTuple(img, y, b)


@dataclass
class RecoveredFieldMap:
    F: GeometryMap
    anchor: RatFunc
    base: RatFunc
    image_anchor: RatFunc
    scale: RatFunc
    values: Dict[RatFunc, RatFunc] = field(default_factory=dict)
    _cache: Dict[RatFunc, RatFunc] = field(default_factory=dict, repr=False)

    def _y(self, x: RatFunc) -> RatFunc:
        if x not in self._cache:
            v = transport_j(self.F, j_map(self.F.source, x, self.anchor))
            if v.witness_a != self.image_anchor:
                raise RecoveryError("image anchor is not stable across the class J1")
            self._cache[x] = v.witness_x
        return self._cache[x]

    def ratio_image(self, x1: RatFunc, x2: RatFunc) -> RatFunc:
        """F~(x1/x2) = mu(F[j(x1, a), j(x2, a)])."""
        return self._y(x1) / self._y(x2)

    def __call__(self, x: RatFunc) -> RatFunc:
        if x in self.values:
            return self.values[x]
        spec = self.F.source
        if x.is_zero():
            out = RatFunc.const(0, self.F.target.nvars)
        else:
            out = None
            for w in [self.base] + _helper_pool(spec, self.anchor):
                if in_closure(spec, w, [self.anchor]) or in_closure(spec, x * w, [self.anchor]):
                    continue
                out = self.ratio_image(x * w, w)
                break
            if out is None:
                raise RecoveryError(f"no helper separates {spec.fmt(x)} from the anchor")
            if not in_closure(spec, x, [self.anchor]):
                # direct reading through the calibrated scale must agree
                direct = self._y(x) / self.scale
                if direct != out:
                    raise RecoveryError(f"scale calibration inconsistent at {spec.fmt(x)}")
        self.values[x] = out
        return out

    def point_contract(self, x: RatFunc) -> bool:
        """F(acl x) = acl(F~(x)) for x transcendental over K."""
        return self.F(GeoPoint(x, self.F.source)) == GeoPoint(self(x), self.F.target)


def recover_field_map(F: GeometryMap, anchor_a: Optional[RatFunc] = None, base_x: Optional[RatFunc] = None) -> RecoveredFieldMap:
    """Build F~ from F via image ratio classes, calibrating the scale on ``base_x``.

    With y_x defined by F(j(x, a)) = j(y_x, b), F~(x) = y_{xw} / y_w for a
    helper w, and t = y_base / F~(base) is the scale in F(j(x,a)) = j(F~(x) t, b).
    """
    spec = F.source
    spec.require_trdeg(5, "reconstruction")
    free = spec.free_vars
    a = anchor_a if anchor_a is not None else spec.var(free[-1])
    base = base_x if base_x is not None else spec.var(free[0])
    if trdeg(spec, [base, a]) != 2:
        raise PreconditionError("base_x must be independent from the anchor")
    probe = [GeoPoint(e, spec) for e in (a, base, a + base, a * base)]
    if not check_rank_preservation(F, probe):
        raise RecoveryError("F fails rank preservation on the calibration sample")
    b = transport_j(F, j_map(spec, base, a)).witness_a
    rec = RecoveredFieldMap(F, a, base, b, RatFunc.const(1, F.target.nvars))
    y_base = rec._y(base)
    f_base = rec.ratio_image(base * base, base)
    rec.scale = y_base / f_base
    return rec


def dependent_point_recovery(
    rec: RecoveredFieldMap, a_prime: RatFunc, t: Optional[RatFunc] = None, s: Optional[RatFunc] = None
) -> GeoPoint:
    """F(acl a') for a' in acl(a), as acl(F~t, F~(ta')) meet acl(F~s, F~(sa'))."""
    spec, tgt = rec.F.source, rec.F.target
    a = rec.anchor
    if trdeg(spec, [a_prime]) != 1 or not in_closure(spec, a_prime, [a]):
        raise PreconditionError("a' must be a point of acl(a)")
    pool = [w for w in _helper_pool(spec, a)]
    if t is None or s is None:
        pair = next(((u, v) for u, v in itertools.combinations(pool, 2) if trdeg(spec, [u, v, a]) == 3), None)
        if pair is None:
            raise PreconditionError("no independent helpers available")
        t, s = pair
    if trdeg(spec, [t, s, a]) != 3:
        raise PreconditionError("helpers t, s must be independent and outside acl(a)")
    src_ok = verify_intersection(
        flat_of(spec, [t, t * a_prime]), flat_of(spec, [s, s * a_prime]), flat_of(spec, [a_prime])
    )
    if not src_ok:
        raise RecoveryError("helper lines do not meet in acl(a') (degenerate helpers)")
    l1 = flat_of(tgt, [rec(t), rec(t * a_prime)])
    l2 = flat_of(tgt, [rec(s), rec(s * a_prime)])
    cand = rec(t * a_prime) / rec(t)
    if not verify_intersection(l1, l2, flat_of(tgt, [cand])):
        raise RecoveryError("transported lines do not meet in the expected point")
    return GeoPoint(cand, tgt)
