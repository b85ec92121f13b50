"""Self-checks for one preset, as run by ``fractal-complexity verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from .decimation import (
    decimation_data,
    expand_numeric,
    multiplicity_recursion,
    spectrum_numeric,
)
from .entropy import bounds, entropy_report, finite_level_lower_bound
from .graph import (
    FractalPreset,
    build_level,
    degree_census_recursive,
    edge_count_formula,
    validate_preset,
    vertex_count_closed_form,
)
from .treecount import count_decimation, count_kirchhoff_probabilistic, count_matrix_tree

ORACLE_SIZE = 400


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def _oracle_levels(preset: FractalPreset, top: int = 3) -> list[int]:
    return [n for n in range(1, top + 1) if vertex_count_closed_form(preset, n) <= ORACLE_SIZE]


def check_structure(preset: FractalPreset) -> str:
    k = preset.n_boundary
    for n in range(5):
        g = build_level(preset, n)
        if g.vertex_count != vertex_count_closed_form(preset, n):
            raise AssertionError(f"|V_{n}| = {g.vertex_count} disagrees with the closed form")
        if sum(g.degrees) != preset.m**n * k * (k - 1) or g.edge_count != edge_count_formula(preset, n):
            raise AssertionError(f"degree sum wrong at level {n}")
        if g.vertex_count > preset.m**n * (k - 1) + 1:
            raise AssertionError(f"|V_{n}| exceeds m^n(|V0|-1)+1")
        census, marked = degree_census_recursive(preset, n)
        if dict(g.degree_census) != census or g.degrees_of_marked != marked:
            raise AssertionError(f"degree census recursion wrong at level {n}")
    return "levels 0..4"


def check_extraction(preset: FractalPreset) -> str:
    dd = decimation_data(preset)
    if sum(k for _, k in dd.sigma_D) != preset.v1_count - preset.n_boundary:
        raise AssertionError("sigma(D) multiplicities do not sum to |V1|-|V0|")
    return f"R = ({dd.P})/({dd.Q}), d = {dd.d}"


def check_identities(preset: FractalPreset, top: int = 8) -> str:
    dd = decimation_data(preset)
    prev = None
    for n in range(top + 1):
        tab = multiplicity_recursion(dd, preset, n)
        if tab.total() != vertex_count_closed_form(preset, n) or tab.zero_mult != 1:
            raise AssertionError(f"dimension identity fails at level {n}")
        if prev is not None:
            old = {x: g for x, g in prev.B_set}
            for x, g in tab.B_set:
                if x in old and g[1:] != old[x]:
                    raise AssertionError(f"shift identity fails at level {n} for {x}")
        prev = tab
    return f"levels 0..{top}"


def check_spectrum(preset: FractalPreset) -> str:
    dd = decimation_data(preset)
    worst = 0.0
    levels = _oracle_levels(preset)
    for n in levels:
        tab = multiplicity_recursion(dd, preset, n)
        exact = np.array(expand_numeric(dd, tab))
        num = spectrum_numeric(build_level(preset, n))
        if exact.shape != num.shape:
            raise AssertionError(f"spectrum sizes differ at level {n}")
        worst = max(worst, float(np.max(np.abs(exact - num))))
    if worst > 1e-8:
        raise AssertionError(f"max eigenvalue deviation {worst:.3e}")
    return f"levels {levels}, max deviation {worst:.1e}"


def check_counts(preset: FractalPreset) -> str:
    dd = decimation_data(preset)
    levels = _oracle_levels(preset)
    for n in levels:
        g = build_level(preset, n)
        mt = count_matrix_tree(g)
        census, _ = degree_census_recursive(preset, n)
        dc = count_decimation(dd, multiplicity_recursion(dd, preset, n), census, n)
        if mt.value != dc.value:
            raise AssertionError(f"level {n}: matrix-tree {mt.value} != decimation {dc.value}")
        kc = count_kirchhoff_probabilistic(g, spectrum_numeric(g))
        if abs(mpmath.expm1(kc.log_value - mt.log_value)) > 1e-6:
            raise AssertionError(f"level {n}: probabilistic Kirchhoff off by more than 1e-6")
        if mt.log_value < finite_level_lower_bound(preset, n) - mpmath.mpf(10) ** -20:
            raise AssertionError(f"level {n}: ln tau below m^n(|V0|-2)ln|V0|")
    return f"levels {levels}"


def check_entropy(preset: FractalPreset, n_max: int = 6) -> str:
    rep = entropy_report(preset, n_max)
    lower, upper = bounds(preset)
    tol = mpmath.mpf(10) ** -25
    if rep.sequence[-1][1] > upper:
        raise AssertionError(f"c_{n_max} exceeds the upper bound")
    if rep.limit_estimate < lower - tol or rep.limit_estimate > upper + tol:
        raise AssertionError("limit estimate outside the bounds")
    return f"limit {mpmath.nstr(rep.limit_estimate, 15)} ({rep.method})"


def check_roundtrip(preset: FractalPreset) -> str:
    text = preset.to_json()
    again = type(preset).from_json(text).to_json()
    if text != again:
        raise AssertionError("preset JSON is not byte-stable")
    return f"{len(text)} bytes"


CHECKS: tuple[tuple[str, Callable[[FractalPreset], str]], ...] = (
    ("structure", check_structure),
    ("extraction", check_extraction),
    ("identities", check_identities),
    ("spectrum", check_spectrum),
    ("counts", check_counts),
    ("entropy", check_entropy),
    ("roundtrip", check_roundtrip),
)


def verify_preset(preset: FractalPreset) -> list[CheckResult]:
    """Run every check; stops after a failed preset validation."""
    problems = validate_preset(preset)
    if problems:
        return [CheckResult("preset", False, "; ".join(problems))]
    out = [CheckResult("preset", True, "valid")]
    for name, fn in CHECKS:
        try:
            with mpmath.workdps(50):
                out.append(CheckResult(name, True, fn(preset)))
        except Exception as exc:  # report, keep going
            out.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return out
