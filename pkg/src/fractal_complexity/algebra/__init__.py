"""Exact arithmetic substrate: polynomials, rational functions, real algebraic
numbers and fraction-free linear algebra over Q."""

from .algnum import (
    POLE,
    AlgNum,
    eval_at_algnum,
    field_element,
    isolate_real_roots,
    root_multiplicity,
    vanishes_at,
)
from .factor import Factor, HintError, factor_rational_and_hinted, rational_roots
from .linalg import (
    RatMatrix,
    SingularSystemError,
    char_poly,
    det_bareiss_int,
    det_bareiss_poly,
    solve_linear_ratfunc,
)
from .poly import (
    Poly,
    RatFunc,
    poly_arith,
    poly_gcd,
    poly_xgcd,
    ratfunc_reduce,
    squarefree_decomposition,
    squarefree_part,
)

__all__ = [
    "POLE", "AlgNum", "eval_at_algnum", "field_element", "isolate_real_roots",
    "root_multiplicity", "vanishes_at", "Factor", "HintError",
    "factor_rational_and_hinted", "rational_roots", "RatMatrix",
    "SingularSystemError", "char_poly", "det_bareiss_int", "det_bareiss_poly",
    "solve_linear_ratfunc", "Poly", "RatFunc", "poly_arith", "poly_gcd",
    "poly_xgcd", "ratfunc_reduce", "squarefree_decomposition", "squarefree_part",
]
