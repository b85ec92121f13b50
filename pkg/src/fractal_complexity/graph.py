"""Combinatorial self-similar structures and their approximating graphs."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

from .algebra import Poly


class PresetError(ValueError):
    """Raised when a preset violates its structural invariants."""


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # smaller id wins so representatives are canonical
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class DecimationOverride:
    """Optional extra data for the decimation engine.

    ``hints`` are polynomials handed to the factoring routine; ``expected_R``
    is a ``(numerator, denominator)`` pair the extracted map must match.
    """

    hints: tuple[Poly, ...] = ()
    expected_R: tuple[Poly, Poly] | None = None

    def to_dict(self) -> dict:
        out: dict = {"hints": [[str(c) for c in h.coeffs] for h in self.hints]}
        if self.expected_R is not None:
            num, den = self.expected_R
            out["expected_R"] = {"num": [str(c) for c in num.coeffs],
                                 "den": [str(c) for c in den.coeffs]}
        return out

    @classmethod
    def from_dict(cls, d: Mapping) -> DecimationOverride:
        hints = tuple(Poly.parse_coeffs(h) for h in d.get("hints", ()))
        er = d.get("expected_R")
        expected = None
        if er is not None:
            expected = (Poly.parse_coeffs(er["num"]), Poly.parse_coeffs(er["den"]))
        return cls(hints, expected)


@dataclass(frozen=True)
class FractalPreset:
    """Level-1 gluing data for a finitely ramified self-similar structure.

    Cell ``i`` is a copy of the previous level whose boundary point ``a`` is
    identified with boundary point ``b`` of cell ``j`` for every gluing entry
    ``(i, a, j, b)``. Boundary point ``v`` of the next level is boundary point
    ``xi`` of cell ``i`` where ``boundary_address[v] == (i, xi)``.
    """

    name: str
    m: int
    v0: tuple[str, ...]
    gluing: tuple[tuple[int, str, int, str], ...]
    boundary_address: Mapping[str, tuple[int, str]]
    decimation_override: DecimationOverride | None = None

    def __post_init__(self):
        object.__setattr__(self, "v0", tuple(str(v) for v in self.v0))
        object.__setattr__(self, "gluing", tuple(
            (int(i), str(a), int(j), str(b)) for i, a, j, b in self.gluing))
        object.__setattr__(self, "boundary_address", {
            str(k): (int(v[0]), str(v[1])) for k, v in self.boundary_address.items()})

    def __hash__(self):
        return hash((self.name, self.m, self.v0, self.gluing,
                     tuple(sorted(self.boundary_address.items()))))

    @property
    def n_boundary(self) -> int:
        return len(self.v0)

    @property
    def v1_count(self) -> int:
        return _level1_classes(self)[0]

    # -- JSON ---------------------------------------------------------------
    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "m": self.m,
            "v0": list(self.v0),
            "gluing": [list(t) for t in self.gluing],
            "boundary_address": {v: list(self.boundary_address[v]) for v in self.v0
                                 if v in self.boundary_address},
        }
        if self.decimation_override is not None:
            out["decimation_override"] = self.decimation_override.to_dict()
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: Mapping) -> FractalPreset:
        try:
            override = d.get("decimation_override")
            return cls(
                name=str(d["name"]),
                m=int(d["m"]),
                v0=tuple(d["v0"]),
                gluing=tuple(tuple(t) for t in d["gluing"]),
                boundary_address={k: tuple(v) for k, v in d["boundary_address"].items()},
                decimation_override=(DecimationOverride.from_dict(override)
                                     if override is not None else None),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise PresetError(f"malformed preset: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> FractalPreset:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Graph:
    """Undirected multigraph with marked boundary vertices.

    ``edges`` holds ``(u, v, multiplicity)`` with ``u < v``, sorted.
    ``level`` is ``None`` for graphs that are not fractal approximations.
    """

    level: int | None
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    marked: Mapping[str, int] = field(default_factory=dict)
    degree_census: Mapping[int, int] = field(default_factory=dict)
    degrees_of_marked: tuple[int, ...] = ()

    @classmethod
    def from_edges(cls, vertex_count: int, edges, marked: Mapping[str, int] | None = None,
                   level: int | None = None) -> Graph:
        mult: Counter = Counter()
        for e in edges:
            u, v = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            mult[(min(u, v), max(u, v))] += k
        canon = tuple(sorted((u, v, k) for (u, v), k in mult.items()))
        deg = [0] * vertex_count
        for u, v, k in canon:
            deg[u] += k
            deg[v] += k
        marked = dict(marked or {})
        return cls(
            level=level,
            vertex_count=vertex_count,
            edges=canon,
            marked=marked,
            degree_census=dict(sorted(Counter(deg).items())),
            degrees_of_marked=tuple(deg[marked[k]] for k in marked),
        )

    @property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.vertex_count
        for u, v, k in self.edges:
            deg[u] += k
            deg[v] += k
        return tuple(deg)

    @property
    def edge_count(self) -> int:
        """Number of edges counted with multiplicity."""
        return sum(k for _, _, k in self.edges)

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        uf = UnionFind(self.vertex_count)
        comps = self.vertex_count
        for u, v, _ in self.edges:
            if uf.union(u, v):
                comps -= 1
        return comps == 1

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "vertex_count": self.vertex_count,
            "edges": [list(e) for e in self.edges],
            "marked": dict(self.marked),
            "degree_census": {str(d): c for d, c in sorted(self.degree_census.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"


def complete_graph(labels: Sequence[str]) -> Graph:
    n = len(labels)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return Graph.from_edges(n, edges, {lab: i for i, lab in enumerate(labels)}, level=0)


# -- preset checks ----------------------------------------------------------

def _structural_violations(preset: FractalPreset) -> list[str]:
    out = []
    labels = set(preset.v0)
    if preset.m < 2:
        out.append("m must be at least 2")
    if len(preset.v0) < 2:
        out.append("v0 must have at least two boundary points")
    if len(labels) != len(preset.v0):
        out.append("v0 labels are not distinct")
    for t in preset.gluing:
        i, a, j, b = t
        if not (0 <= i < preset.m and 0 <= j < preset.m):
            out.append(f"gluing {list(t)} refers to a cell outside 0..{preset.m - 1}")
        if i == j:
            out.append(f"gluing {list(t)} glues a cell to itself")
        if a not in labels or b not in labels:
            out.append(f"gluing {list(t)} uses an unknown boundary label")
    missing = [v for v in preset.v0 if v not in preset.boundary_address]
    if missing:
        out.append(f"boundary_address is missing {missing}")
    extra = [v for v in preset.boundary_address if v not in labels]
    if extra:
        out.append(f"boundary_address has unknown labels {extra}")
    targets = [tuple(t) for t in preset.boundary_address.values()]
    if len(set(targets)) != len(targets):
        out.append("boundary_address is not injective")
    for v, (i, xi) in preset.boundary_address.items():
        if not 0 <= i < preset.m or xi not in labels:
            out.append(f"boundary_address[{v!r}] = {[i, xi]} is not a valid (cell, label)")
    return out


@lru_cache(maxsize=64)
def _level1_classes(preset: FractalPreset):
    """Union-find of (cell, label) slots at level 1.

    Returns ``(|V1|, classes)`` where classes are lists of slot ids
    ``cell*|V0| + label_index`` that get merged, including singletons.
    """
    k = len(preset.v0)
    idx = {lab: n for n, lab in enumerate(preset.v0)}
    uf = UnionFind(preset.m * k)
    for i, a, j, b in preset.gluing:
        uf.union(i * k + idx[a], j * k + idx[b])
    groups: dict[int, list[int]] = {}
    for s in range(preset.m * k):
        groups.setdefault(uf.find(s), []).append(s)
    classes = tuple(tuple(g) for _, g in sorted(groups.items()))
    # vertices inside a cell that are not boundary points are absent at level 0,
    # so |V1| is the number of merged slot classes
    return len(classes), classes


def validate_preset(preset: FractalPreset) -> list[str]:
    """Return a list of invariant violations; empty means the preset is valid."""
    problems = _structural_violations(preset)
    if problems:
        return problems
    g1 = _build_from(preset, complete_graph(preset.v0))
    if not g1.is_connected():
        problems.append("G1 disconnected")
    v0, v1 = len(preset.v0), g1.vertex_count
    if v1 <= v0:
        problems.append(f"|V1| = {v1} is not larger than |V0| = {v0}")
    if v1 > preset.m * (v0 - 1) + 1:
        problems.append(f"|V1| = {v1} exceeds m(|V0|-1)+1 = {preset.m * (v0 - 1) + 1}")
    marked_ids = list(g1.marked.values())
    if len(set(marked_ids)) != len(marked_ids):
        problems.append("two boundary points of G1 coincide")
    return problems


def require_valid(preset: FractalPreset) -> None:
    problems = validate_preset(preset)
    if problems:
        raise PresetError("; ".join(problems))


# -- construction -----------------------------------------------------------

def _build_from(preset: FractalPreset, prev: Graph) -> Graph:
    """One self-similar step: m copies of ``prev`` glued per the preset."""
    nv = prev.vertex_count
    m = preset.m
    uf = UnionFind(m * nv)
    for i, a, j, b in preset.gluing:
        uf.union(i * nv + prev.marked[a], j * nv + prev.marked[b])
    new_id: dict[int, int] = {}
    for s in range(m * nv):
        r = uf.find(s)
        if r not in new_id:
            new_id[r] = len(new_id)

    def vid(s: int) -> int:
        return new_id[uf.find(s)]

    edges = []
    for c in range(m):
        off = c * nv
        for u, v, k in prev.edges:
            edges.append((vid(off + u), vid(off + v), k))
    marked = {}
    for lab in preset.v0:
        i, xi = preset.boundary_address[lab]
        marked[lab] = vid(i * nv + prev.marked[xi])
    level = None if prev.level is None else prev.level + 1
    return Graph.from_edges(len(new_id), edges, marked, level=level)


def build_level(preset: FractalPreset, n: int) -> Graph:
    """The level-``n`` approximating graph ``G_n``."""
    if n < 0:
        raise ValueError("level must be non-negative")
    require_valid(preset)
    g = complete_graph(preset.v0)
    for _ in range(n):
        g = _build_from(preset, g)
    return g


def vertex_count_closed_form(preset: FractalPreset, n: int) -> int:
    """``|V_n| = (m^n (|V1|-|V0|) + m|V0| - |V1|) / (m-1)``."""
    if n < 0:
        raise ValueError("level must be non-negative")
    m, v0, v1 = preset.m, len(preset.v0), preset.v1_count
    num = m**n * (v1 - v0) + m * v0 - v1
    q, r = divmod(num, m - 1)
    if r:
        raise ArithmeticError("closed form did not give an integer")
    return q


def degree_census_recursive(preset: FractalPreset, n: int) -> tuple[dict[int, int], tuple[int, ...]]:
    """Degree census of ``G_n`` without building the graph.

    Returns ``(census, degrees_of_marked)`` with marked degrees in ``v0`` order.
    """
    if n < 0:
        raise ValueError("level must be non-negative")
    k = len(preset.v0)
    census: Counter = Counter({k - 1: k})
    marked = [k - 1] * k
    _, classes = _level1_classes(preset)
    idx = {lab: t for t, lab in enumerate(preset.v0)}
    for _ in range(n):
        new = Counter({d: c * preset.m for d, c in census.items()})
        slot_degree = {}
        for cls in classes:
            degs = [marked[s % k] for s in cls]
            total = sum(degs)
            for s in cls:
                slot_degree[s] = total
            if len(cls) > 1:
                for d in degs:
                    new[d] -= 1
                new[total] += 1
        marked = [slot_degree[preset.boundary_address[lab][0] * k
                              + idx[preset.boundary_address[lab][1]]]
                  for lab in preset.v0]
        census = +new
    return dict(sorted(census.items())), tuple(marked)


def wedge(g1: Graph, x1: int, g2: Graph, x2: int) -> Graph:
    """Identify vertex ``x1`` of ``g1`` with vertex ``x2`` of ``g2``."""
    if not 0 <= x1 < g1.vertex_count or not 0 <= x2 < g2.vertex_count:
        raise ValueError("wedge vertex out of range")

    def remap(v: int) -> int:
        if v == x2:
            return x1
        return g1.vertex_count + (v if v < x2 else v - 1)

    edges = list(g1.edges) + [(remap(u), remap(v), k) for u, v, k in g2.edges]
    return Graph.from_edges(g1.vertex_count + g2.vertex_count - 1, edges)


def load_preset(name_or_path: str) -> FractalPreset:
    """Resolve against the built-in catalog first, then as a JSON file path."""
    from .presets import CATALOG

    if name_or_path in CATALOG:
        return CATALOG[name_or_path]
    try:
        with open(name_or_path, encoding="utf-8") as fh:
            return FractalPreset.from_json(fh.read())
    except FileNotFoundError:
        raise PresetError(f"unknown preset {name_or_path!r}") from None
    except json.JSONDecodeError as exc:
        raise PresetError(f"{name_or_path}: invalid JSON ({exc})") from None


def edge_count_formula(preset: FractalPreset, n: int) -> int:
    """``m^n |V0| (|V0|-1) / 2``."""
    k = len(preset.v0)
    return preset.m**n * k * (k - 1) // 2
