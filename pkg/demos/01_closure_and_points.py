"""Walk through algebraic closure in Q(t1, t2, t3) and the points it defines."""
from fieldgeom.points import flat_contains, flat_of, point_of
from fieldgeom.pregeometry import ExtensionSpec, basis_of, in_closure, trdeg

spacer = "_" * 60

L = ExtensionSpec(3)
t1, t2, t3 = (L.var(i) for i in (1, 2, 3))

print("Transcendence degree counts algebraically independent elements.")
elems = [t1 + t2, t1 * t2, t1]
print("trdeg(t1+t2, t1*t2, t1) =", trdeg(L, elems))
print("a basis:", [L.fmt(e) for e in basis_of(L, elems)])

print("\nt1 is a root of X^2 - (t1+t2)X + t1*t2, so it lies in the closure:")
print("t1 in acl(t1+t2, t1*t2)?", in_closure(L, t1, [t1 + t2, t1 * t2]))
print("t3 in acl(t1, t2)?", in_closure(L, t3, [t1, t2]))

print(spacer)
print("\nA point is the closure of one transcendental element.")
print("acl(t1) == acl(1/t1^2)?", point_of(L, t1) == point_of(L, 1 / t1 ** 2))
print("acl(t1) == acl(t1 + t2)?", point_of(L, t1) == point_of(L, t1 + t2))

line = flat_of(L, [t1, t2])
print("\nThe line through acl(t1) and acl(t2) has rank", line.rank)
for e in (t1 - 5 * t2, t1 ** 2 * t2, t3 + t1):
    print(f"  {L.fmt(e):>12} on it?", flat_contains(line, point_of(L, e)))
