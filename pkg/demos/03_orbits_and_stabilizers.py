"""Tour of the orbit layer.

Characters of the abelian congruence kernel correspond to matrices over
a lower-level quotient ring, and the group permutes them by
conjugation.  The classification needs one representative per orbit of
three reduced families, a canonicalization routine for everything else,
and the stabilizer of each representative."""

from gl2reps.ring import RingSpec, ring_make
from gl2reps.matgroup import group_enumerate, mat_conj
from gl2reps.orbits import (
    adjoined_units,
    canonicalize,
    classify_mod_p,
    orbit_reps,
    stabilizer,
)

spec = RingSpec("padic", 3, 2)
print("=== reduced orbit representatives at p = 3, r = 2 ===")
for o in orbit_reps(spec):
    print(f"  {o.type_tag:22s} params {o.params}  beta {o.beta}")

print()
print("=== classification mod p is total ===")
Rq = ring_make(spec.quotient(1))
for beta in [(1, 0, 0, 1), (0, 0, 0, 1), (0, 1, 1, 0), (2, 1, 0, 2)]:
    tag, data = classify_mod_p(Rq, beta)
    print(f"  {beta} -> {tag} {data}")

print()
print("=== canonicalization with a scalar twist ===")
beta = (2, 1, 0, 2)  # 2I + nilpotent over F_3
canon = canonicalize(spec, beta)
print(f"beta = {beta}: subtract {canon.twist} * I, conjugate by "
      f"{canon.conjugator} -> {canon.descriptor.beta} "
      f"({canon.descriptor.type_tag})")

print()
print("=== stabilizers: unit-adjoined ring times congruence kernel ===")
G = group_enumerate(spec)
for o in orbit_reps(spec):
    C = adjoined_units(G.ring, o.beta_hat)
    T = stabilizer(G, o)
    print(f"  {o.type_tag:22s} |O_r[b]^x| = {len(C):3d}  |T| = {len(T):4d}  "
          f"orbit size [G:T] = {len(G) // len(T)}")
