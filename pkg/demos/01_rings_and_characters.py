"""Tour of the exact ring layer.

Two flavors of finite local ring share one integer encoding: Z/p^r
(codes are residues) and F_p[t]/t^r (codes pack the coefficients base
p).  Everything downstream works uniformly over both.
"""

from gl2reps.ring import RingSpec, abelian_chars, additive_char, ring_make

print("=== Z/8: arithmetic and valuation ===")
spec = RingSpec("padic", 2, 3)
R = ring_make(spec)
print(f"ring size {R.size}, units {R.units}")
print(f"inv(3) = {R.inv(3)}  (3*3 = 9 = 1 mod 8)")
print(f"valuation(4) = {R.valuation(4)}, valuation(0) = {R.valuation(0)}")

print()
print("=== F_2[t]/t^3: same API, polynomial arithmetic ===")
spec_l = RingSpec("laurent", 2, 3)
L = ring_make(spec_l)
t = L.pi_mul(1, 1)
print(f"t has code {t}; t*t has code {L.mul(t, t)} and valuation "
      f"{L.valuation(L.mul(t, t))}")
print(f"(1+t)^2 = 1+t^2 in characteristic 2: "
      f"{L.mul(L.add(1, t), L.add(1, t)) == L.add(1, L.mul(t, t))}")

print()
print("=== the additive character of full conductor ===")
psi = additive_char(spec)
print("psi(1) =", psi(1))
print("psi(4) =", psi(4), " (nontrivial on the last filtration step)")
print("psi(x+y) = psi(x) psi(y):",
      all(abs(psi(R.add(x, y)) - psi(x) * psi(y)) < 1e-12
          for x in R.elements for y in R.elements))

print()
print("=== the dual of a finite abelian group ===")
table = abelian_chars(list(R.units), R.mul)
print(f"(Z/8)^x has {len(table.characters)} characters; "
      f"orthogonality residual {table.orthogonality_residual():.2e}")
for chi in table.characters:
    print("  ", [round(chi[u].real) for u in table.elements])
print("every character squares to 1, so (Z/8)^x = C2 x C2")
