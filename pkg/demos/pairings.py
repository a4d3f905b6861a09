"""Index pairings <E^{k1,k2}, U_n> computed through explicit irreps."""
from ncsphere.representations import pairing_table

rows = pairing_table(max_k=2, max_n=6, min_n=1)
labels = sorted({(p.k1, p.k2) for p in rows})
print("label   " + "".join(f"n={n:<4}" for n in range(1, 7)))
for lab in labels:
    cells = []
    for n in range(1, 7):
        p = next(r for r in rows if (r.k1, r.k2, r.n) == (*lab, n))
        cells.append(f"{p.pairing if p.regime == 'closed-form' else '.':<6}")
    print(f"{lab[0]},{lab[1]}     " + "".join(cells))
print("(. = outside the regime n > k1 + k2)")
