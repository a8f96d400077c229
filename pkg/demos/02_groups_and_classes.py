"""Tour of the matrix-group layer: GL2 over a finite local ring, its
congruence kernels, the additive coordinates on them, and conjugacy
classes."""

from gl2reps.ring import RingSpec, ring_make
from gl2reps.matgroup import (
    congruence_subgroup,
    conjugacy_classes,
    coset_reps,
    group_enumerate,
    lift_iso,
    mat_mul,
)

spec = RingSpec("padic", 2, 2)
G = group_enumerate(spec)
print(f"|GL2(Z/4)| = {len(G)}  (generators verified by closure)")

K1 = congruence_subgroup(G, 1)
print(f"|K_1| = {len(K1)}; abelian:",
      all(mat_mul(G.ring, x, y) == mat_mul(G.ring, y, x)
          for x in K1 for y in K1))

print()
print("=== additive coordinates on K_1 ===")
to_k, from_k = lift_iso(spec, 1)
x = (1, 0, 0, 0)
g = to_k(x)
print(f"matrix {x} over F_2  ->  1 + 2x = {g}")
print(f"round trip: {from_k(g) == x}")

print()
print("=== conjugacy classes (canonical layout) ===")
classes = conjugacy_classes(G)
print(f"{len(classes)} classes; sizes {classes.sizes}")
print("first three representatives:", classes.reps[:3])

print()
print("=== cosets ===")
reps = coset_reps(G, K1)
print(f"[G : K_1] = {len(reps)} = |GL2(F_2)|")

print()
print("=== the stress-size group ===")
spec3 = RingSpec("padic", 3, 2)
G3 = group_enumerate(spec3)
classes3 = conjugacy_classes(G3)
print(f"|GL2(Z/9)| = {len(G3)} with {len(classes3)} classes")
