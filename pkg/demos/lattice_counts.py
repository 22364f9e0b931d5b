"""Lattice points in the wedge S(M, R) and slab R(N, R1, R2) against their areas."""

import math

from qshape.lattice import (
    area_S,
    boundary_length_bound,
    count_R_exact,
    count_S_exact,
    predicted_count_R,
)

print("wedge counts")
for M in (10**2, 10**4, 10**6):
    for R in (2, 10):
        cnt, area = count_S_exact(M, R), area_S(M, R)
        bound = 4 * (boundary_length_bound(M, R) + 1)
        print(f"  M={M:>8} R={R:>3}  count={cnt:>9}  area={area:>14.2f}  |diff|={abs(cnt - area):8.2f} <= {bound:.1f}")

print("slab counts, R1 = 4, R2 = 3")
for N in (10**3, 10**4, 10**5, 10**6, 10**7):
    cnt, pred = count_R_exact(N, 4, 3), predicted_count_R(N, 4, 3)
    print(f"  N={N:>9}  count={cnt:>10}  main term={pred:>14.1f}  error/sqrt(N)={(cnt - pred) / math.sqrt(N):7.3f}")
