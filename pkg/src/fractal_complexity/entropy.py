"""Tree entropy ``c_n = ln tau(G_n) / |V_n|`` and its limit."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .decimation import decimation_data, multiplicity_recursion
from .graph import FractalPreset, build_level, degree_census_recursive, vertex_count_closed_form
from .treecount import FactoredCount, count_decimation, log_count


@dataclass(frozen=True)
class ExponentFit:
    """Per-prime exponents ``e(n) = alpha*m**n + beta*n + gamma``."""

    coefficients: tuple[tuple[int, Fraction, Fraction, Fraction], ...]
    levels: tuple[int, ...]
    limit: mpmath.mpf


@dataclass(frozen=True)
class FitRefusal:
    reason: str


@dataclass(frozen=True)
class EntropyReport:
    preset: str
    sequence: tuple[tuple[int, mpmath.mpf], ...]
    lower_bound: mpmath.mpf
    upper_bound: mpmath.mpf
    limit_estimate: mpmath.mpf
    method: str
    error_estimate: mpmath.mpf | None = None
    fit: ExponentFit | None = None
    refusal: str | None = None
    dps: int = 30

    def to_dict(self) -> dict:
        s = lambda x: None if x is None else mpmath.nstr(x, self.dps, strip_zeros=False)
        out = {
            "preset": self.preset,
            "sequence": [[n, s(c)] for n, c in self.sequence],
            "bounds": {"lower": s(self.lower_bound), "upper": s(self.upper_bound)},
            "limit_estimate": {
                "value": s(self.limit_estimate),
                "method": self.method,
                "error_estimate": s(self.error_estimate),
            },
            "fit": None,
        }
        if self.fit is not None:
            out["fit"] = [
                {"prime": str(p),
                 "alpha": [str(a.numerator), str(a.denominator)],
                 "beta": [str(b.numerator), str(b.denominator)],
                 "gamma": [str(g.numerator), str(g.denominator)],
                 "alpha_decimal": s(mpmath.mpf(a.numerator) / a.denominator)}
                for p, a, b, g in self.fit.coefficients]
        if self.refusal is not None:
            out["fit_refusal"] = self.refusal
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _volume_factor(preset: FractalPreset) -> Fraction:
    """``(m-1)/(|V1|-|V0|)``, so that ``|V_n| ~ m**n / factor``."""
    return Fraction(preset.m - 1, preset.v1_count - preset.n_boundary)


def level_log_count(preset: FractalPreset, n: int, dps: int = 30) -> mpmath.mpf:
    dd = decimation_data(preset)
    census, _ = degree_census_recursive(preset, n)
    return log_count(dd, multiplicity_recursion(dd, preset, n), census, n, dps)


def level_count(preset: FractalPreset, n: int, dps: int = 30) -> FactoredCount:
    dd = decimation_data(preset)
    census, _ = degree_census_recursive(preset, n)
    return count_decimation(dd, multiplicity_recursion(dd, preset, n), census, n, dps)


def complexity_sequence(preset: FractalPreset, n_max: int, dps: int = 30):
    """``[(n, c_n)]`` for ``1 <= n <= n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    out = []
    with mpmath.workdps(dps + 10):
        for n in range(1, n_max + 1):
            out.append((n, level_log_count(preset, n, dps) / vertex_count_closed_form(preset, n)))
    return out


def bounds(preset: FractalPreset, dps: int = 30) -> tuple[mpmath.mpf, mpmath.mpf]:
    """Lower and upper bounds on the limit of ``c_n``.

    With two boundary points the lower bound comes from ``tau(G_n) >=
    3**(m**(n-1))`` when ``G_1`` has a cycle, and is 0 when ``G_1`` is a tree.
    """
    k, m, v1 = preset.n_boundary, preset.m, preset.v1_count
    with mpmath.workdps(dps + 10):
        upper = mpmath.log(mpmath.mpf((m - 1) * k * (k - 1)) / (v1 - k))
        if k > 2:
            lower = mpmath.log(3) / 2
        else:
            g1 = build_level(preset, 1)
            if g1.edge_count == g1.vertex_count - 1:
                lower = mpmath.mpf(0)
            else:
                lower = mpmath.log(3) * (m - 1) / (m * (v1 - 2))
    return lower, upper


def finite_level_lower_bound(preset: FractalPreset, n: int, dps: int = 30) -> mpmath.mpf:
    """``m**n (|V0|-2) ln|V0|``, a lower bound for ``ln tau(G_n)``."""
    k = preset.n_boundary
    with mpmath.workdps(dps + 10):
        return preset.m**n * (k - 2) * mpmath.log(k)


def _solve3(ms: Sequence[int], ns: Sequence[int], es: Sequence[int]):
    """Solve ``a*M + b*n + c = e`` at three points over Q."""
    rows = [[Fraction(mm), Fraction(nn), Fraction(1), Fraction(ee)]
            for mm, nn, ee in zip(ms, ns, es)]
    for col in range(3):
        piv = next((r for r in range(col, 3) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [x * inv for x in rows[col]]
        for r in range(3):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return rows[0][3], rows[1][3], rows[2][3]


def fit_exponent_pattern(preset: FractalPreset, counts: Sequence[tuple[int, FactoredCount]],
                         dps: int = 30) -> ExponentFit | FitRefusal:
    """Fit every prime exponent to ``alpha*m**n + beta*n + gamma``.

    Three levels determine the pattern and every further level must agree
    exactly; otherwise a :class:`FitRefusal` is returned.
    """
    if len(counts) < 4:
        return FitRefusal("need at least four levels")
    levels = [n for n, _ in counts]
    if levels != list(range(levels[0], levels[0] + len(levels))):
        return FitRefusal("levels are not consecutive")
    exps = []
    for n, c in counts:
        if c.factorization is None or c.residue != 1:
            return FitRefusal(f"level {n} is not fully factored")
        exps.append(dict(c.factorization))
    primes = sorted(set().union(*exps))
    m = preset.m
    coeffs = []
    for p in primes:
        e = [x.get(p, 0) for x in exps]
        sol = _solve3([m**n for n in levels[:3]], levels[:3], e[:3])
        if sol is None:
            return FitRefusal("degenerate levels")
        a, b, g = sol
        for n, en in zip(levels, e):
            if a * m**n + b * n + g != en:
                return FitRefusal(f"exponent of {p} breaks the pattern at level {n}")
        coeffs.append((p, a, b, g))
    vol = _volume_factor(preset)
    with mpmath.workdps(dps + 10):
        limit = mpmath.fsum(
            mpmath.mpf(a.numerator * vol.numerator) / (a.denominator * vol.denominator)
            * mpmath.log(p) for p, a, _, _ in coeffs)
    return ExponentFit(tuple(coeffs), tuple(levels), limit)


def entropy_report(preset: FractalPreset, n_max: int, dps: int = 30) -> EntropyReport:
    """Sequence, bounds and a limit estimate.

    The estimate is the exact fitted limit when levels 2..n_max (at least
    four of them) follow the exponent pattern; otherwise the last term, with
    a geometric tail estimate from the last three terms when available.
    """
    seq = complexity_sequence(preset, n_max, dps)
    lower, upper = bounds(preset, dps)
    fit = refusal = None
    if n_max >= 5:
        counts = [(n, level_count(preset, n, dps)) for n in range(2, n_max + 1)]
        got = fit_exponent_pattern(preset, counts, dps)
        if isinstance(got, ExponentFit):
            fit = got
        else:
            refusal = got.reason
    else:
        refusal = "need at least four levels"
    if fit is not None:
        return EntropyReport(preset.name, tuple(seq), lower, upper, fit.limit, "fit",
                             None, fit, None, dps)
    err = None
    with mpmath.workdps(dps + 10):
        if len(seq) >= 3:
            d1 = abs(seq[-1][1] - seq[-2][1])
            d0 = abs(seq[-2][1] - seq[-3][1])
            r = d1 / d0 if d0 else mpmath.mpf(0)
            err = d1 * r / (1 - r) if r < 1 else d1
        elif len(seq) == 2:
            err = abs(seq[-1][1] - seq[-2][1])
    return EntropyReport(preset.name, tuple(seq), lower, upper, seq[-1][1], "last-term",
                         err, None, refusal, dps)
