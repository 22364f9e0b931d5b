"""Empirical distribution of shape parameters against the limiting constants.

For each type the count of fields with |disc| <= X and (|a|/c, b) in a box is
compared with the stated constant and with a sieve computation of the same
limit. Increase N to watch the ratios settle (N = 10**6 takes a few seconds).
"""

import sys

from qshape.census import Rect, count_C_tau, theorem_ratio_report
from qshape.fields import TWO_POWER, Type

N = int(float(sys.argv[1])) if len(sys.argv) > 1 else 10**5
rect = Rect(1, 4, 1, 3)

print(f"fields with (|a|/c, b) in ({rect.R1lo:g},{rect.R1hi:g}] x ({rect.R2lo:g},{rect.R2hi:g}], N = {N:g}")
print(f"{'class':>6} {'count':>9} {'count/N':>10} {'stated':>10} {'sieve':>10}")
for typ in Type:
    for sign in (1, -1):
        X = 2 ** TWO_POWER[typ] * N**3
        rep = theorem_ratio_report(typ, sign, X, rect)
        label = typ.value + ("+" if sign > 0 else "-")
        print(f"{label:>6} {rep.empirical:>9} {rep.ratio:>10.6f} {rep.predicted_ratio:>10.6f} {rep.sieve_ratio:>10.6f}")

print()
print("triples with a b^2 c^3 = tau (mod 32), R1 = 4, R2 = 3")
for tau in (1, 2, 3, 12):
    rep = count_C_tau(N, 4, 3, tau)
    print(f"  tau={tau:>2}  count/N={rep.ratio:.6f}  stated={rep.predicted_ratio:.6f}  sieve={rep.sieve_ratio:.6f}")
