"""Walk through the two odd-level constructions at r = 3, p = 2, where
the kernel character lives one congruence level below its stabilizer.

Split families: a maximal isotropic subgroup for an alternating trace
pairing carries the extensions.  Cuspidal family: the pairing on the
relevant quotient is non-degenerate, so a Heisenberg-style lift gives
the unique irreducible over each extension, and a cyclic extension of
order q^2 - 1 finishes the job."""

from gl2reps.ring import RingSpec
from gl2reps.context import build_context
from gl2reps.orbits import CUSPIDAL, SPLIT_DIAG, adjoined_units, orbit_reps
from gl2reps.clifford import (
    cyclic_extend,
    heisenberg,
    odd_cuspidal,
    odd_split,
    psi_tilde_extensions,
    split_form,
    stable_extensions,
)

spec = RingSpec("padic", 2, 3)
ctx = build_context(spec)
print(f"|G| = {len(ctx.G)}, levels l = {ctx.l}, l' = {ctx.lp}")

print()
print("=== split pipeline on the diagonal orbit ===")
orbit = [o for o in orbit_reps(spec) if o.type_tag == SPLIT_DIAG][0]
data = split_form(ctx, orbit)
print(f"H has index {len(ctx.K(ctx.lp)) // len(data.H)} in K_l'; "
      f"its image is a maximal isotropic subspace of size {len(data.h_image)} "
      f"(radical size {len(data.radical)})")
ext = stable_extensions(ctx, orbit)
print(f"extensions of the kernel character to H: {len(ext.extensions)}; "
      f"stable under the adjoined units: {len(ext.stable)}")
print("(at q = 2 the stability filter keeps all of them; they induce the")
print(" q^2 = 4 distinct constituents in pairs)")
recs = odd_split(ctx, orbit)
print(f"outputs: {len(recs)} irreducibles of dimension "
      f"{sorted({r.dim for r in recs})}")

print()
print("=== cuspidal pipeline ===")
orbit = [o for o in orbit_reps(spec) if o.type_tag == CUSPIDAL][0]
exts, C, Z1, ZKl, pb = psi_tilde_extensions(ctx, orbit)
print(f"extensions of the kernel character to Z^1 K_l: {len(exts)}")
eta = heisenberg(ctx, orbit)
print(f"Heisenberg lift: dimension {eta.dim} over a quotient of size "
      f"{len(eta.meta['form'].space)}; pairing non-degenerate: "
      f"{eta.meta['form'].is_nondegenerate()}")
T = adjoined_units(ctx.ring, orbit.beta_hat).product(ctx.K(ctx.lp))
lifts = cyclic_extend(ctx, eta, T)
print(f"cyclic extensions to the stabilizer (|T/U| = q^2 - 1): {len(lifts)}")
recs = odd_cuspidal(ctx, orbit)
print(f"outputs over the orbit: {len(recs)} irreducibles of dimension "
      f"{sorted({r.dim for r in recs})}")
