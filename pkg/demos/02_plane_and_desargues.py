"""The projective plane spanned by t1, t2, t3 and a Desargues configuration in it."""
import random

from fieldgeom.planes import PlaneAnchor, collinear, desargues_result, plane_point, random_desargues_config
from fieldgeom.pregeometry import ExtensionSpec

L = ExtensionSpec(3)
t1, t2, t3 = (L.var(i) for i in (1, 2, 3))

for mode in ("additive", "multiplicative"):
    anchor = PlaneAnchor(L, t1, t2, t3, mode)
    print(f"{mode} coordinates:")
    vs = [(1, 1, 1), (1, 2, 3), (1, 3, 5)]
    pts = [plane_point(anchor, v) for v in vs]
    for v, p in zip(vs, pts):
        print(f"  {v} -> {p}")
    print("  collinear in the geometry:", collinear(*pts))

print("\nA random pair of perspective triangles over P^2(Q):")
cfg = random_desargues_config(random.Random(3))
print("center", cfg.center)
print("triangles", cfg.tri1, cfg.tri2)
res = desargues_result(cfg, PlaneAnchor(L, t1, t2, t3))
print("axis points", res.axis_points)
print("axis points collinear:", res.holds, " lifted check:", res.lifted)
