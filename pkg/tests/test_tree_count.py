import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fractal_complexity.decimation import decimation_data, multiplicity_recursion, spectrum_numeric
from fractal_complexity.graph import Graph, build_level, complete_graph, degree_census_recursive
from fractal_complexity.presets import SG, SG3, TREE3
from fractal_complexity.treecount import (
    FactoredCount,
    combinatorial_laplacian,
    count_decimation,
    count_kirchhoff_probabilistic,
    count_matrix_tree,
    log_count,
    matrix_tree_determinant,
    trial_factor,
)


def sg3_exponents(n: int) -> dict[int, int]:
    six = 6**n
    a = Fraction(2, 5) * (six - 1)
    b = Fraction(13 * six - 15 * n + 12, 25)
    c = Fraction(3 * six - 15 * n - 3, 25)
    d = Fraction(7 * six + 15 * n - 7, 25)
    assert all(x.denominator == 1 for x in (a, b, c, d))
    return {2: int(a), 3: int(b), 5: int(c), 7: int(d)}


def decimation(preset, n):
    dd = decimation_data(preset)
    census, _ = degree_census_recursive(preset, n)
    return count_decimation(dd, multiplicity_recursion(dd, preset, n), census, n)


def test_k3_has_three_trees():
    k3 = complete_graph(["0", "1", "2"])
    assert count_matrix_tree(k3).value == 3
    kc = count_kirchhoff_probabilistic(k3, spectrum_numeric(k3))
    assert abs(float(kc.approx) - 3) < 1e-12


def test_kn_cayley():
    for n in range(2, 8):
        g = complete_graph([str(i) for i in range(n)])
        assert count_matrix_tree(g).value == n ** (n - 2)


def test_sg3_level1():
    g = build_level(SG3, 1)
    mt = count_matrix_tree(g)
    assert mt.value == 5292 == 2**2 * 3**3 * 7**2
    assert mt.factorization == ((2, 2), (3, 3), (7, 2))
    assert mt.value == round(np.linalg.det(np.array(combinatorial_laplacian(g))[1:, 1:]))
    # the level-n closed form already holds at n = 1
    assert dict(mt.factorization) == {p: e for p, e in sg3_exponents(1).items() if e}


@pytest.mark.parametrize("n", [2, 3])
def test_sg3_closed_form(n):
    mt = count_matrix_tree(build_level(SG3, n))
    assert dict(mt.factorization) == sg3_exponents(n)
    assert mt.residue == 1


def test_sg_level3():
    assert decimation(SG, 3).factorization == ((2, 13), (3, 22), (5, 5))


def test_tree_counts():
    for n in range(6):
        fc = decimation(TREE3, n)
        assert fc.factorization == ((3, 3**n),)


@pytest.mark.parametrize("preset,levels", [(SG3, (1, 2, 3)), (TREE3, (1, 2)), (SG, (1, 2, 3))])
def test_three_way_agreement(preset, levels):
    for n in levels:
        g = build_level(preset, n)
        mt = count_matrix_tree(g)
        dc = decimation(preset, n)
        assert mt.value == dc.value
        assert mt.factorization == dc.factorization
        kc = count_kirchhoff_probabilistic(g, spectrum_numeric(g))
        assert abs(mpmath.expm1(kc.log_value - mt.log_value)) < 1e-6
        with mpmath.workdps(40):
            assert abs(dc.log_value - mt.log_value) < mpmath.mpf(10) ** -25


def test_decimation_beyond_oracle():
    for n in range(4, 7):
        assert dict(decimation(SG3, n).factorization) == sg3_exponents(n)


def test_log_count_large_levels():
    dd = decimation_data(SG3)
    census, _ = degree_census_recursive(SG3, 6)
    lv = log_count(dd, multiplicity_recursion(dd, SG3, 6), census, 6)
    with mpmath.workdps(40):
        want = mpmath.fsum(e * mpmath.log(p) for p, e in sg3_exponents(6).items())
        assert abs(lv - want) < mpmath.mpf(10) ** -25
    dd = decimation_data(TREE3)
    census, _ = degree_census_recursive(TREE3, 4)
    lv = log_count(dd, multiplicity_recursion(dd, TREE3, 4), census, 4)
    with mpmath.workdps(40):
        assert abs(lv - 81 * mpmath.log(3)) < mpmath.mpf(10) ** -25


def test_level_zero(preset):
    k = preset.n_boundary
    assert decimation(preset, 0).value == k ** (k - 2)


def test_disconnected_graph_rejected():
    with pytest.raises(ValueError):
        count_matrix_tree(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_deleted_vertex_on_fractal(sg3):
    g = build_level(sg3, 1)
    assert {matrix_tree_determinant(g, v) for v in range(g.vertex_count)} == {5292}


def test_factored_count_json():
    fc = FactoredCount.from_int(5292)
    doc = fc.to_dict(1, "matrix-tree")
    assert doc["value"] == "5292"
    assert doc["factorization"] == [["2", "2"], ["3", "3"], ["7", "2"]]
    assert fc.to_json(1, "x") == FactoredCount.from_int(5292).to_json(1, "x")
    assert fc.product_string() == "2^2 * 3^3 * 7^2"


def test_digit_cap_keeps_log():
    fc = FactoredCount.from_exponents({2: 10**6}, cap=1000)
    assert fc.value is None
    with mpmath.workdps(40):
        assert abs(fc.log_value - 10**6 * mpmath.log(2)) < mpmath.mpf(10) ** -25


@given(st.integers(1, 10**15))
def test_trial_factor_reassembles(n):
    exps, residue = trial_factor(n)
    prod = residue
    for p, e in exps.items():
        prod *= p**e
    assert prod == n
    assert residue == 1 or residue > 10**6


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_kirchhoff_matches_matrix_tree_random(n, seed):
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    edges += [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
    g = Graph.from_edges(n, edges)
    mt = count_matrix_tree(g)
    kc = count_kirchhoff_probabilistic(g, spectrum_numeric(g))
    assert math.isclose(float(kc.log_value), float(mt.log_value), rel_tol=1e-9, abs_tol=1e-9)
