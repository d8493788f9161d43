"""Recover a field automorphism from the geometry map it induces."""
from fieldgeom.points import point_of
from fieldgeom.pregeometry import ExtensionSpec
from fieldgeom.reconstruction import dependent_point_recovery, mobius_map, recover_field_map

L = ExtensionSpec(5)
t = [None] + [L.var(i) for i in range(1, 6)]

F = mobius_map(L, 5, 1, 1, 1, -1)   # t5 -> (t5 + 1)/(t5 - 1)
print("geometry map:", F.name)
print("it only sees points, e.g. F(acl(t5)) =", F(point_of(L, t[5])))

rec = recover_field_map(F)
print("\nanchor", L.fmt(rec.anchor), " base", L.fmt(rec.base), " scale", L.fmt(rec.scale))
for x in (t[5], t[1] * t[5] + 3, 1 / (t[2] + t[5])):
    y = rec(x)
    print(f"  F~({L.fmt(x)}) = {L.fmt(y)}   matches substitution: {y == F.field_map(x)}")

print("\nPoints inside acl(anchor) go through two helper lines:")
for ap in (t[5] ** 2 + 1, 1 / (t[5] + 1)):
    print(f"  F(acl({L.fmt(ap)})) =", dependent_point_recovery(rec, ap))
