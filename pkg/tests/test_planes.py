import random
from fractions import Fraction

import pytest

from fieldgeom.planes import (
    DegenerateConfiguration,
    DesarguesConfig,
    PlaneAnchor,
    ProjPoint,
    collinear,
    coordinatization_check,
    cross,
    desargues_check,
    desargues_result,
    frame_family,
    lemma11_verify,
    maximality_probe,
    meet,
    plane_axioms_check,
    plane_point,
    random_desargues_config,
)
from fieldgeom.points import point_of
from fieldgeom.pregeometry import ExtensionSpec, PreconditionError

S = ExtensionSpec(3)
t1, t2, t3 = (S.var(i) for i in (1, 2, 3))
ADD = PlaneAnchor(S, t1, t2, t3)
MUL = PlaneAnchor(S, t1, t2, t3, "multiplicative")


def test_projective_points_up_to_scalar():
    assert ProjPoint((1, 2, 3)) == ProjPoint((-2, -4, -6))
    assert ProjPoint((Fraction(1, 2), 1, 0)) == ProjPoint((1, 2, 0))
    assert len({ProjPoint((1, 1, 0)), ProjPoint((3, 3, 0))}) == 1
    with pytest.raises(ValueError):
        ProjPoint((0, 0, 0))


def test_plane_points():
    assert plane_point(ADD, (1, 2, 3)) == point_of(S, t1 + 2 * t2 + 3 * t3)
    assert plane_point(MUL, (1, 1, 0)) == point_of(S, t1 * t2)
    assert plane_point(ADD, (1, 0, 0)) == point_of(S, t1)
    with pytest.raises(ValueError):
        plane_point(ADD, (0, 0, 0))
    with pytest.raises(ValueError):
        plane_point(MUL, (Fraction(1, 2), 0, 1))


def test_collinearity():
    p = lambda e: point_of(S, e)
    assert collinear(p(t1), p(t2), p(t1 + t2))
    assert not collinear(p(t1), p(t2), p(t3))
    assert collinear(*(plane_point(ADD, v) for v in [(1, 1, 1), (1, 2, 3), (1, 3, 5)]))


@pytest.mark.parametrize("vs", [
    [(1, 0, 0), (0, 1, 0), (1, 1, 0)],
    [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    [(1, 1, 1), (1, 2, 3), (2, 3, 4)],
])
def test_coordinatization_examples(vs):
    assert coordinatization_check(ADD, vs)
    assert coordinatization_check(MUL, vs)


def test_anchor_must_be_independent():
    with pytest.raises(PreconditionError):
        PlaneAnchor(S, t1, t2, t1 + t2)


def test_coordinatization_on_random_triples():
    rng = random.Random(8)
    k = ExtensionSpec(4, {4})
    anchor = PlaneAnchor(k, k.var(1) + k.var(4), k.var(2) * k.var(4), k.var(3), "additive")
    for i in range(60):
        vs = [tuple(rng.randint(-5, 5) for _ in range(3)) for _ in range(2)]
        if not all(any(v) for v in vs):
            continue
        third = tuple(2 * a - b for a, b in zip(*vs)) if i % 2 else tuple(rng.randint(-5, 5) for _ in range(3))
        if not any(third):
            continue
        assert coordinatization_check(anchor, vs + [third])


def test_axioms_on_standard_frame():
    rep = plane_axioms_check([(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)], ADD)
    assert rep.passed
    assert all(rep.axioms.values())


def test_two_lines_meet_in_cross_product():
    assert meet(ProjPoint((1, 0, 0)), ProjPoint((0, 1, 0))) == ProjPoint((0, 0, 1))
    assert cross((1, 0, 0), (0, 1, 0)) == (0, 0, 1)


def test_axioms_report_degenerate_sample():
    rep = plane_axioms_check([(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert not rep.passed
    assert rep.axioms["noncollinear_triple"] is False and rep.axioms["rank3"] is False


def test_frame_family():
    fam = frame_family()
    assert len(fam) == 13 and len(set(fam)) == 13


def test_maximality_probe():
    cands = [ADD.element(v) for v in [(1, 1, 0), (1, -1, 1), (2, 1, 0), (1, 1, 1)]]
    cands += [t1 * t2 + t3, t1 ** 2 + t2]
    rep = maximality_probe(ADD, cands)
    assert rep.passed and rep.compatible >= 3 and rep.candidates == 6
    with pytest.raises(PreconditionError):
        maximality_probe(ADD, [S.const(1)])


def _hand_built():
    O = ProjPoint((1, 1, 1))
    A = (ProjPoint((1, 0, 0)), ProjPoint((0, 1, 0)), ProjPoint((0, 0, 1)))
    B = tuple(ProjPoint(tuple(2 * o + k * a for o, a in zip(O.coords, p.coords))) for k, p in zip((1, 3, -1), A))
    return DesarguesConfig(O, A, B)


def test_desargues_hand_built():
    cfg = _hand_built()
    assert desargues_check(cfg)
    assert desargues_check(cfg, ADD)
    assert desargues_result(cfg, ADD).lifted is True


def test_desargues_rejects_shared_vertex():
    cfg = _hand_built()
    bad = DesarguesConfig(cfg.center, cfg.tri1, (cfg.tri1[0],) + cfg.tri2[1:])
    with pytest.raises(DegenerateConfiguration):
        desargues_check(bad)


def test_desargues_rejects_non_perspective():
    cfg = _hand_built()
    moved = ProjPoint(tuple(c + d for c, d in zip(cfg.tri2[0].coords, (0, 1, 0))))
    with pytest.raises(DegenerateConfiguration):
        desargues_check(DesarguesConfig(cfg.center, cfg.tri1, (moved,) + cfg.tri2[1:]))


def test_desargues_random():
    rng = random.Random(9)
    for _ in range(20):
        assert desargues_check(random_desargues_config(rng))


def test_additive_rigidity():
    k = ExtensionSpec(4, {4})
    xs = [k.var(i) for i in (1, 2, 3)]
    assert lemma11_verify("additive", k, xs=xs, c=2, c_prime=1, ds=[5, 5, 5])
    assert lemma11_verify("additive", k, xs=xs, c=1, c_prime=1, ds=[0, 0, 0])
    assert lemma11_verify("additive", k, xs=xs, c=3, c_prime=2, ds=[k.var(4), 1, k.var(4) ** 2])
    with pytest.raises(PreconditionError):
        lemma11_verify("additive", k, xs=[xs[0], xs[1], xs[0] + xs[1]], c=1, c_prime=1, ds=[0, 0, 0])
    with pytest.raises(PreconditionError):
        lemma11_verify("additive", k, xs=xs, c=1, c_prime=1, ds=[xs[0], 0, 0])


def test_multiplicative_rigidity():
    assert lemma11_verify("multiplicative", S, us=[t1, t2], n=1, m=1, a=3, b=1)
    assert lemma11_verify("multiplicative", S, us=[t1, t2], n=3, m=2, a=Fraction(1, 4), b=9)
    with pytest.raises(PreconditionError):
        lemma11_verify("multiplicative", S, us=[t1, t2], n=1, m=2, a=2, b=1)
    with pytest.raises(PreconditionError):
        lemma11_verify("multiplicative", S, us=[t1, t1 ** 2], n=1, m=1, a=1, b=1)
