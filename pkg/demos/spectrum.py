"""Minimal polynomials of the spin extensions L_(k) and their Lagrange idempotents."""
from ncsphere.algebra import make_algebra
from ncsphere.cayley_hamilton import minimal_polynomial, predicted_spectrum
from ncsphere.line_bundles import labels_for, lagrange_idempotent, qlb_trace
from ncsphere.scalars import ALPHA
from ncsphere.spin import extension_matrix

ctx = make_algebra("sl2h", alpha=ALPHA)
for k in range(1, 5):
    mp = minimal_polynomial(extension_matrix(ctx, k))
    print(f"k={k}  degree {mp.degree}")
    for label, root in predicted_spectrum(k).roots:
        print(f"    lambda_{label[0]}{label[1]} = {root}")

print("\ntraces of the idempotents for k=3")
for lab in labels_for(3):
    print(f"    tr e_{lab.k1}{lab.k2} = {qlb_trace(lagrange_idempotent(3, lab)).reduced()}")
