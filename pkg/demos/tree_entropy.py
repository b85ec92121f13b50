"""
Tree entropy of the 3-Tree and the gaskets
==========================================

c_n = ln tau(G_n) / |V_n| for increasing n, next to the exact limit from the
exponent fit and the bounds.
"""

import mpmath

from fractal_complexity import CATALOG, entropy_report

mpmath.mp.dps = 30

for name in ("tree3", "sg", "sg3"):
    rep = entropy_report(CATALOG[name], 7)
    print(f"--- {name}")
    for n, c in rep.sequence:
        print(f"  c_{n} = {mpmath.nstr(c, 20)}")
    print(f"  bounds [{mpmath.nstr(rep.lower_bound, 12)}, {mpmath.nstr(rep.upper_bound, 12)}]")
    print(f"  limit ({rep.method}) = {mpmath.nstr(rep.limit_estimate, 30)}")
    if rep.fit:
        for p, a, b, g in rep.fit.coefficients:
            print(f"    exponent of {p}: {a}*m^n + {b}*n + {g}")

# the 3-Tree terms have a closed form and sit below ln3/2
print(mpmath.nstr(mpmath.log(3) / 2, 30))
