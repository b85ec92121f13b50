"""Built-in structures: the level-3 Sierpinski gasket, the standard gasket and
the 3-Tree."""

from __future__ import annotations

from .algebra import Poly
from .graph import DecimationOverride, FractalPreset


def triangular_gasket(name: str, side: int, override: DecimationOverride | None = None) -> FractalPreset:
    """Gasket whose cells are the upward triangles of a side-``side`` grid.

    Grid points are ``(i, j)`` with ``i + j <= side``; the cell at ``(i, j)``
    has boundary labels ``"0" -> (i, j)``, ``"1" -> (i+1, j)``,
    ``"2" -> (i, j+1)``. Cells sharing a grid point are glued there.
    """
    cells = [(i, j) for i in range(side) for j in range(side) if i + j <= side - 1]
    offsets = {"0": (0, 0), "1": (1, 0), "2": (0, 1)}
    slots: dict[tuple[int, int], list[tuple[int, str]]] = {}
    for c, (i, j) in enumerate(cells):
        for lab, (di, dj) in offsets.items():
            slots.setdefault((i + di, j + dj), []).append((c, lab))
    gluing = []
    for point in sorted(slots):
        members = slots[point]
        for a in range(len(members)):
            for b in range(a + 1, len(members)):
                (ci, la), (cj, lb) = members[a], members[b]
                gluing.append((ci, la, cj, lb))
    index = {cell: c for c, cell in enumerate(cells)}
    boundary = {
        "0": (index[(0, 0)], "0"),
        "1": (index[(side - 1, 0)], "1"),
        "2": (index[(0, side - 1)], "2"),
    }
    return FractalPreset(name, len(cells), ("0", "1", "2"), tuple(gluing), boundary, override)


def m_tree(m: int, name: str | None = None) -> FractalPreset:
    """``m`` complete graphs on ``m`` points sharing one hub vertex.

    Cell ``i`` keeps boundary point ``i`` fixed and meets the other cells at
    its label ``(i+1) mod m``.
    """
    labels = tuple(str(i) for i in range(m))
    hub = [(i, str((i + 1) % m)) for i in range(m)]
    gluing = tuple((hub[i][0], hub[i][1], hub[i + 1][0], hub[i + 1][1]) for i in range(m - 1))
    boundary = {str(i): (i, str(i)) for i in range(m)}
    return FractalPreset(name or f"tree{m}", m, labels, gluing, boundary)


SG3 = triangular_gasket(
    "sg3", 3,
    DecimationOverride(
        hints=(Poly((7, -24, 16)),),
        expected_R=(Poly((0, -90, 282, -288, 96)), Poly((-7, 6))),
    ),
)
SG = triangular_gasket("sg", 2)
TREE3 = m_tree(3)

CATALOG: dict[str, FractalPreset] = {p.name: p for p in (SG3, SG, TREE3)}
