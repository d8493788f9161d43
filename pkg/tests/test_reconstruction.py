import random

import pytest

from fieldgeom.configurations import j_map
from fieldgeom.points import point_of
from fieldgeom.pregeometry import ExtensionSpec, PreconditionError, trdeg
from fieldgeom.reconstruction import (
    AnchorMismatch,
    GeometryMap,
    J1Class,
    RecoveryError,
    affine_map,
    dependent_point_recovery,
    identity_map,
    mobius_map,
    mu,
    odot,
    oplus,
    permutation_map,
    ratio_add,
    ratio_mul,
    recover_field_map,
)
from fieldgeom.selftest import random_element

S = ExtensionSpec(5)
t1, t2, t3, t4, t5 = (S.var(i) for i in range(1, 6))
J = J1Class(S, t5)
c = lambda v: S.const(v)


def test_oplus_odot():
    assert oplus(J.member(t1), J.member(t2)).witness_x == t1 + t2
    assert odot(J.member(t1), J.member(t2)).witness_x == t1 * t2
    assert oplus(J.member(t1), J.member(t2)).points == j_map(S, t1 + t2, t5).points
    with pytest.raises(PreconditionError):
        oplus(J.member(t1), J.member(t1))
    with pytest.raises(AnchorMismatch):
        oplus(J.member(t1), j_map(S, t2, t4))


def test_operations_commute_and_associate():
    u, v, w = J.member(t1), J.member(t2), J.member(t3)
    for op in (oplus, odot):
        assert op(u, v).witness_x == op(v, u).witness_x
        assert op(op(u, v), w).witness_x == op(u, op(v, w)).witness_x


def test_ratio_examples():
    assert mu(ratio_mul(J.ratio(2 * t1, t1), J.ratio(3 * t2, t2))) == c(6)
    assert mu(ratio_mul(J.ratio(t1, t2), J.ratio(t2, t3))) == t1 / t3
    r = J.ratio(t1, t2)
    assert ratio_add(r, J.zero()).equiv(r)
    assert ratio_mul(r, J.zero()).is_zero


def test_mu_examples():
    assert mu(J.ratio(t1, t2)) == t1 / t2
    assert mu(J.zero()) == c(0)
    assert mu(J.ratio(2 * t1, t1)) == c(2)


def test_ratio_equivalence_and_zero_sum():
    assert J.ratio(t1, t2).equiv(J.ratio(t1 * t3, t2 * t3))
    assert not J.ratio(t1, t2).equiv(J.ratio(t2, t1))
    assert ratio_add(J.ratio(t1, t2), J.ratio(-t1, t2)).is_zero


def test_j1_needs_large_extension():
    with pytest.raises(PreconditionError):
        J1Class(ExtensionSpec(4), ExtensionSpec(4).var(4))


def test_mu_field_laws_sampled():
    rng = random.Random(21)
    checked = 0
    for _ in range(30):
        x1, x2, y1, y2 = (random_element(S, rng, 2, vars_=[1, 2, 3, 4]) for _ in range(4))
        if any(trdeg(S, [e, t5]) != 2 for e in (x1, x2, y1, y2)):
            continue
        p, q = J.ratio(x1, x2), J.ratio(y1, y2)
        assert mu(ratio_mul(p, q)) == mu(p) * mu(q)
        assert mu(ratio_add(p, q)) == mu(p) + mu(q)
        checked += 1
    assert checked >= 20


def _round_trip(F, xs):
    rec = recover_field_map(F)
    assert rec.scale == c(1)
    for x in xs:
        assert rec(x) == F.field_map(x)
        assert rec.point_contract(x)
    return rec


def test_recover_swap():
    F = permutation_map(S, {1: 2, 2: 1})
    rec = _round_trip(F, [t1, t1 ** 2 + 1, t1 / (t3 + 2), t1 * t2 - t4])
    assert rec(t1) == t2


def test_recover_identity():
    rec = _round_trip(identity_map(S), [t1, t2 * t3, 1 / (t1 + t4)])
    assert rec(c(3)) == c(3)


def test_recover_shift():
    F = affine_map(S, 1, 1, 1)
    rec = _round_trip(F, [t1, t2 + t1 ** 3])
    assert rec(t1 ** 2) == (t1 + 1) ** 2


def test_recover_mobius_and_cycle():
    _round_trip(mobius_map(S, 2, 1, 1, 1, -1), [t2, t1 + t2, t2 ** 2 * t3])
    _round_trip(permutation_map(S, {1: 2, 2: 3, 3: 1}), [t1, t1 + t2 * t3])


def test_rationals_map_to_rationals():
    rec = recover_field_map(affine_map(S, 3, 2, -1))
    for v in (1, -4, 7):
        assert rec(c(v)) == c(v)


def test_dependent_points():
    rec = recover_field_map(permutation_map(S, {1: 2, 2: 1}), anchor_a=t1, base_x=t3)
    assert dependent_point_recovery(rec, t1 ** 2) == point_of(S, t2 ** 2)
    rec = recover_field_map(identity_map(S))
    assert dependent_point_recovery(rec, t5) == point_of(S, t5)
    rec = recover_field_map(affine_map(S, 1, 1, 1), anchor_a=t1, base_x=t2)
    got = dependent_point_recovery(rec, 1 / (t1 + 1))
    assert got == point_of(S, 1 / (t1 + 2))
    assert got == rec.F(point_of(S, 1 / (t1 + 1)))


def test_dependent_point_precondition():
    rec = recover_field_map(identity_map(S))
    with pytest.raises(PreconditionError):
        dependent_point_recovery(rec, t1)


def test_non_geometric_map_is_rejected():
    collapse = GeometryMap(S, S, lambda p: point_of(S, t1), "collapse")
    with pytest.raises(RecoveryError):
        recover_field_map(collapse)
