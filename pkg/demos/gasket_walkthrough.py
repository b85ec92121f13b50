"""
Spanning trees of the level-3 Sierpinski gasket
===============================================

Builds the first few approximating graphs, extracts the decimation map from
G_1 and counts spanning trees three ways.
"""

import mpmath
import numpy as np

from fractal_complexity import (
    build_level,
    count_kirchhoff_probabilistic,
    count_matrix_tree,
    decimation_data,
    multiplicity_recursion,
    spectrum_numeric,
)
from fractal_complexity.decimation import expand_numeric
from fractal_complexity.graph import degree_census_recursive
from fractal_complexity.presets import SG3
from fractal_complexity.treecount import count_decimation

# G_n glues six copies of G_{n-1}; sizes grow roughly by a factor 6
for n in range(4):
    g = build_level(SG3, n)
    print(f"G_{n}: {g.vertex_count} vertices, {g.edge_count} edges")

# the decimation map comes from the 7 interior vertices of G_1
dd = decimation_data(SG3)
print("R(z) =", f"({dd.P}) / ({dd.Q})")
print("interior eigenvalues:", ", ".join(f"{x} (x{k})" for x, k in dd.sigma_D))

# the exact spectrum of Delta_2, grouped into A- and B-sets
tab = multiplicity_recursion(dd, SG3, 2)
for x, k in tab.A_set:
    print(f"A  {x}: {k}")
for x, grid in tab.B_set:
    print(f"B  {x}: {grid}")

# compare against a dense eigensolver
exact = np.array(expand_numeric(dd, tab))
dense = spectrum_numeric(build_level(SG3, 2))
print("max eigenvalue gap:", np.max(np.abs(exact - dense)))

# three counts at level 2
g = build_level(SG3, 2)
census, _ = degree_census_recursive(SG3, 2)
mt = count_matrix_tree(g)
dc = count_decimation(dd, tab, census, 2)
kc = count_kirchhoff_probabilistic(g, spectrum_numeric(g))
print("matrix-tree:", mt.product_string())
print("decimation: ", dc.product_string())
print("kirchhoff:   ln =", mpmath.nstr(kc.log_value, 15), "vs", mpmath.nstr(mt.log_value, 15))
