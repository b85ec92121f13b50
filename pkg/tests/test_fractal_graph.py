import json
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fractal_complexity.graph import (
    FractalPreset,
    Graph,
    PresetError,
    build_level,
    complete_graph,
    degree_census_recursive,
    edge_count_formula,
    load_preset,
    require_valid,
    validate_preset,
    vertex_count_closed_form,
    wedge,
)
from fractal_complexity.presets import SG, SG3, TREE3, m_tree, triangular_gasket
from fractal_complexity.treecount import matrix_tree_determinant

EXPECTED_VERTICES = {
    "sg3": [3, 10, 52, 304, 1816],
    "sg": [3, 6, 15, 42, 123],
    "tree3": [3, 7, 19, 55, 163],
}


def numpy_tree_count(g: Graph) -> int:
    """Independent oracle: floating determinant of the reduced Laplacian."""
    lap = np.zeros((g.vertex_count, g.vertex_count))
    for u, v, k in g.edges:
        lap[u, v] -= k
        lap[v, u] -= k
        lap[u, u] += k
        lap[v, v] += k
    return int(round(np.linalg.det(lap[1:, 1:])))


def random_connected_graph(rng: random.Random, n: int) -> Graph:
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < 0.3:
                edges.append((u, v))
    return Graph.from_edges(n, edges)


@pytest.mark.parametrize("name", sorted(EXPECTED_VERTICES))
def test_vertex_counts(name):
    preset = load_preset(name)
    for n, want in enumerate(EXPECTED_VERTICES[name]):
        assert build_level(preset, n).vertex_count == want
        assert vertex_count_closed_form(preset, n) == want


def test_level0_is_complete_graph(preset):
    g = build_level(preset, 0)
    k = preset.n_boundary
    assert g.vertex_count == k
    assert g.edge_count == k * (k - 1) // 2
    assert sorted(g.marked) == sorted(preset.v0)


def test_sg3_level1_shape(sg3):
    g = build_level(sg3, 1)
    assert (g.vertex_count, g.edge_count) == (10, 18)
    assert g.degree_census == {2: 3, 4: 6, 6: 1}
    assert g.degrees_of_marked == (2, 2, 2)


def test_structural_formulas(preset):
    k = preset.n_boundary
    for n in range(5):
        g = build_level(preset, n)
        assert sum(g.degrees) == preset.m**n * k * (k - 1)
        assert g.edge_count == edge_count_formula(preset, n)
        assert g.vertex_count <= preset.m**n * (k - 1) + 1
        assert g.is_connected()


def test_census_recursion(preset):
    for n in range(6):
        census, marked = degree_census_recursive(preset, n)
        if n <= 4:
            g = build_level(preset, n)
            assert census == dict(g.degree_census)
            assert marked == g.degrees_of_marked
        assert sum(census.values()) == vertex_count_closed_form(preset, n)


def test_tree_counts_are_trees_of_triangles(tree3):
    # every level of the 3-Tree is a tree of triangles, so tau = 3**(3**n)
    for n in range(4):
        g = build_level(tree3, n)
        assert matrix_tree_determinant(g) == 3 ** (3**n)


def test_preset_json_roundtrip(preset):
    text = preset.to_json()
    again = FractalPreset.from_json(text)
    assert again.to_json() == text
    assert again == preset


def test_graph_json_is_stable(sg3):
    a = build_level(sg3, 2).to_json()
    b = build_level(sg3, 2).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["vertex_count"] == 52


def test_load_preset_from_file(tmp_path):
    path = tmp_path / "t.json"
    path.write_text(SG.to_json())
    assert load_preset(str(path)) == SG
    with pytest.raises(PresetError):
        load_preset("no-such-preset")


def test_disconnected_level1_is_rejected():
    bad = FractalPreset("bad", 3, ("0", "1", "2"), (), {"0": (0, "0"), "1": (1, "1"), "2": (2, "2")})
    problems = validate_preset(bad)
    assert any("G1 disconnected" in p for p in problems)
    with pytest.raises(PresetError):
        require_valid(bad)


def test_malformed_preset_json():
    with pytest.raises(PresetError):
        FractalPreset.from_dict({"name": "x"})


def test_shipped_presets_are_valid(preset):
    assert validate_preset(preset) == []


def test_other_family_members():
    assert validate_preset(triangular_gasket("t4", 4)) == []
    t4 = m_tree(4)
    assert validate_preset(t4) == []
    assert build_level(t4, 1).vertex_count == 13


def test_wedge_of_triangles():
    k3 = complete_graph(["a", "b", "c"])
    w = wedge(k3, 0, k3, 0)
    assert (w.vertex_count, w.edge_count) == (5, 6)
    assert matrix_tree_determinant(w) == 9


def test_wedge_multiplicativity_random():
    rng = random.Random(20261015)
    for _ in range(25):
        g = random_connected_graph(rng, rng.randint(2, 8))
        h = random_connected_graph(rng, rng.randint(2, 8))
        w = wedge(g, rng.randrange(g.vertex_count), h, rng.randrange(h.vertex_count))
        assert w.vertex_count == g.vertex_count + h.vertex_count - 1
        tw = matrix_tree_determinant(w)
        assert tw == matrix_tree_determinant(g) * matrix_tree_determinant(h)
        assert tw == numpy_tree_count(w)


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_deleted_vertex_independence(n, seed):
    g = random_connected_graph(random.Random(seed), n)
    vals = {matrix_tree_determinant(g, v) for v in range(n)}
    assert vals == {numpy_tree_count(g)}


@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_from_edges_canonical(n, seed):
    rng = random.Random(seed)
    g = random_connected_graph(rng, n)
    flat = [(v, u) for u, v, k in g.edges for _ in range(k)]
    rng.shuffle(flat)
    assert Graph.from_edges(n, flat) == g


def test_loops_rejected():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 0)])
