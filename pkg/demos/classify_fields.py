"""Classify the first few pure quartic fields and show their discriminants.

Run: python3 demos/classify_fields.py [max_m]
"""

import sys

from qshape import pure_quartic_field
from qshape.fields import admissible_range


def main(max_m=40):
    print(f"{'m':>5} {'counting':>12} {'funakura':>12} {'class':>6} {'disc':>14}")
    for m in admissible_range(2, max_m):
        f = pure_quartic_field(m)
        cf, ff = f.counting_form, f.funakura_form
        print(f"{m:>5} {str((cf.a, cf.b, cf.c)):>12} {str((ff.a, ff.b, ff.c)):>12} "
              f"{f.cls.label:>6} {f.discriminant:>14}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 40)
