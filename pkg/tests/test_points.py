import random

import pytest

from fieldgeom.points import (
    GeoPoint,
    coordinate_flat_intersection,
    coordinate_support,
    flat_contains,
    flat_eq,
    flat_join,
    flat_leq,
    flat_of,
    flat_of_vars,
    lemma34_check,
    point_of,
    verify_intersection,
)
from fieldgeom.pregeometry import ExtensionSpec, PreconditionError, trdeg
from fieldgeom.selftest import random_element

S = ExtensionSpec(3)
t1, t2, t3 = (S.var(i) for i in (1, 2, 3))


def test_point_equality_is_closure_equivalence():
    assert point_of(S, t1) == point_of(S, 1 / t1)
    assert point_of(S, t1) == point_of(S, t1 ** 2)
    assert point_of(S, t1) != point_of(S, t1 + t2)


def test_points_are_unhashable():
    with pytest.raises(TypeError):
        hash(point_of(S, t1))


def test_constants_are_not_points():
    with pytest.raises(PreconditionError):
        point_of(S, S.const(3))
    k = ExtensionSpec(2, {1})
    with pytest.raises(PreconditionError):
        point_of(k, k.var(1) ** 2 + 1)


def test_flat_containment():
    line = flat_of(S, [t1, t2])
    plane = flat_of(S, [t1, t2, t3])
    assert flat_contains(line, point_of(S, t1 + t2))
    assert flat_leq(line, plane)
    assert not flat_leq(plane, line)
    assert line.kind == "line" and plane.kind == "plane"
    assert flat_eq(flat_of(S, [t1 + t2, t1 * t2]), line)
    assert flat_eq(flat_join(flat_of(S, [t1]), flat_of(S, [t2])), line)


def test_coordinate_intersections():
    assert coordinate_flat_intersection({1, 2}, {2, 3}) == (2,)
    assert coordinate_flat_intersection({1}, {2}) == ()
    assert coordinate_flat_intersection({1, 2, 3}, {1, 2, 3}) == (1, 2, 3)


def test_coordinate_intersection_rejects_non_coordinate_input():
    with pytest.raises(PreconditionError):
        coordinate_flat_intersection([t1], [t2])
    k = ExtensionSpec(3, {1})
    with pytest.raises(PreconditionError):
        coordinate_flat_intersection({1, 2}, {2}, k)


def test_coordinate_support_recognises_disguised_generators():
    assert coordinate_support(S, [t1 + t2, t1 * t2]) == (1, 2)
    assert coordinate_support(S, [t1 + t2]) is None
    assert coordinate_support(S, []) == ()


def test_verify_intersection():
    f, g = flat_of(S, [t1, t2]), flat_of(S, [t2, t3])
    assert verify_intersection(f, g, flat_of(S, [t2])) is True
    assert verify_intersection(f, g, flat_of(S, [t1])) is False
    # two lines through a common point in a plane
    l1, l2 = flat_of(S, [t1, t2]), flat_of(S, [t1 + t3, t2 + t3])
    assert verify_intersection(l1, l2, flat_of(S, [t1 - t2])) is True


def test_coordinate_flat_transfer_examples():
    s1, s2 = ExtensionSpec(3), ExtensionSpec(4)
    v = lambda i: s1.var(i)
    r = lemma34_check(s1, s2, [v(1)], [v(2)])
    assert r.agree and r.not_contained_small and r.not_contained_large
    r = lemma34_check(s1, s2, [v(1)], [v(1)])
    assert r.agree and not r.not_contained_small and not r.not_contained_large
    r = lemma34_check(s1, s2, [v(1), v(2)], [v(1)])
    assert r.agree and r.not_contained_small and r.witness == v(2)


def test_point_equality_is_an_equivalence():
    rng = random.Random(3)
    for _ in range(40):
        x = random_element(S, rng, 2)
        if trdeg(S, [x]) == 0:
            continue
        y = x ** 2 + 3 if rng.random() < 0.5 else random_element(S, rng, 2)
        z = 1 / (y + 1) if rng.random() < 0.5 else random_element(S, rng, 2)
        if trdeg(S, [y]) == 0 or trdeg(S, [z]) == 0:
            continue
        p, q, r = (GeoPoint(e, S) for e in (x, y, z))
        assert p == p
        assert (p == q) == (q == p)
        if p == q and q == r:
            assert p == r


def test_containment_invariant_under_regeneration():
    rng = random.Random(4)
    for _ in range(30):
        g = [random_element(S, rng, 2) for _ in range(2)]
        regen = [g[0] + g[1], g[0] * g[1]]
        if trdeg(S, regen) != trdeg(S, g):
            continue
        w = random_element(S, rng, 2)
        assert flat_contains(flat_of(S, g), w) == flat_contains(flat_of(S, regen), w)


def test_modular_law_on_coordinate_flats():
    rng = random.Random(5)
    spec = ExtensionSpec(6, {6})
    free = list(spec.free_vars)
    for _ in range(60):
        A = set(rng.sample(free, rng.randint(0, 5)))
        B = set(rng.sample(free, rng.randint(0, 5)))
        C = coordinate_flat_intersection(A, B, spec)
        fa, fb = flat_of_vars(spec, A), flat_of_vars(spec, B)
        assert flat_of_vars(spec, C).rank == len(A & B)
        assert flat_join(fa, fb).rank + len(C) == fa.rank + fb.rank
        assert verify_intersection(fa, fb, flat_of_vars(spec, C)) is True


def test_coordinate_flat_transfer_on_sampled_towers():
    rng = random.Random(6)
    for _ in range(100):
        k = rng.randint(1, 4)
        m = k + rng.randint(0, 2)
        s1, s2 = ExtensionSpec(k), ExtensionSpec(m)
        pick = lambda: [s1.var(i) for i in rng.sample(range(1, k + 1), rng.randint(0, k))]
        assert lemma34_check(s1, s2, pick(), pick()).agree


def test_coordinate_flat_transfer_rejects_bad_tower():
    with pytest.raises(PreconditionError):
        lemma34_check(ExtensionSpec(3), ExtensionSpec(2), [], [])
