"""The truncated de Rham complex of the NC sphere and its cohomology."""
import sys

from ncsphere.derham import build_complex, cohomology, d_squared_zero

N = int(sys.argv[1]) if len(sys.argv) > 1 else 3
cx = build_complex(N)
for p, om in enumerate(cx.omega):
    print(f"Omega{p}: dim {om.dim}, irreducible pieces {om.irreducible_dims()}")
print("d1 d0 = 0:", d_squared_zero(cx))
coh = cohomology(N, cx=cx)
print("cohomology:", coh.dims)
for l, h in coh.per_spin.items():
    print(f"    spin {l}: {h}")
print("generators:", coh.generators)
