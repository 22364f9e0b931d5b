"""Trace-zero Gram matrices of a few fields, their reduction and torus factorization.

Fields of one class with the same shape parameters share a shape; changing
|a|/c moves the shape along a one-parameter torus orbit.
"""

import numpy as np

from qshape import pure_quartic_field, shape
from qshape.gram import gram_perp, torus_factorization_check

np.set_printoptions(precision=5, suppress=True)

for m in (2, 3, 5, 12, -7, 18):
    f = pure_quartic_field(m)
    d = shape(f)
    print(f"m = {m}  class {f.cls.label}  lambda1^2 = {d.lambda1_sq}  lambda2 = {d.lambda2}")
    print("  exact trace-zero Gram:")
    for row in gram_perp(f):
        print("   ", "  ".join(str(v) for v in row))
    print("  reduced (det 1):")
    print("   ", str(d.reduced).replace("\n", "\n    "))
    print(f"  in fundamental domain: {d.in_domain}, torus factorization exact: {torus_factorization_check(f)}")
    print()
