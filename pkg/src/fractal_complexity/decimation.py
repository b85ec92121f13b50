"""Spectral decimation for fully symmetric fractal graphs.

The level-1 probabilistic Laplacian is split into boundary and interior
blocks and its Schur complement S(z) is computed over Q(z). From S we read
off the scalar functions ``phi`` and ``R`` with ``S = phi * (P0 - R)``, where
``P0`` is the probabilistic Laplacian of the complete graph on the boundary.
Every point of the exceptional set (spectrum of the interior block together
with the real zeros of ``phi``) receives one of eight case tags, and those
tags drive an exact multiplicity recursion over real algebraic numbers.

Spectra at level ``n`` are reported as an A-set, whose members carry a
single multiplicity, and a B-set, whose members carry a grid ``g[k]`` giving
the common multiplicity of all ``d**k`` points ``z`` with ``R^k(z) = beta``.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm, gcd

import mpmath
import numpy as np

from .algebra import (
    POLE,
    AlgNum,
    HintError,
    Poly,
    RatFunc,
    RatMatrix,
    char_poly,
    eval_at_algnum,
    factor_rational_and_hinted,
    poly_gcd,
    ratfunc_reduce,
    root_multiplicity,
    solve_linear_ratfunc,
    vanishes_at,
)
from .graph import FractalPreset, Graph, build_level, vertex_count_closed_form


class DecimationError(ValueError):
    """The level-1 structure does not admit the decimation described here."""


CASE_NAMES = {
    1: "regular",
    2: "phi zero, R removable",
    3: "in sigma(D), poles of phi and phi*R, R' != 0",
    4: "in sigma(D), no poles, phi != 0",
    5: "in sigma(D), no poles, phi = 0",
    6: "in sigma(D), poles of phi and phi*R, R' = 0",
    7: "phi zero, R pole",
    8: "in sigma(D), no poles, phi = 0, R pole",
}


@dataclass(frozen=True, eq=False)
class DecimationData:
    """Everything extracted from the level-1 graph.

    ``P`` and ``Q`` are coprime integer polynomials, jointly primitive, with
    ``Q`` having positive leading coefficient and ``R = P/Q``.
    """

    n_boundary: int
    phi: RatFunc
    R: RatFunc
    P: Poly
    Q: Poly
    s_diag: RatFunc
    s_off: RatFunc
    char_D: Poly
    sigma_D: tuple[tuple[AlgNum, int], ...]
    exceptional: tuple[tuple[AlgNum, int], ...]
    hints: tuple[Poly, ...] = ()

    @property
    def d(self) -> int:
        return self.P.degree

    @property
    def P_d(self) -> int:
        return int(self.P.lead)

    @property
    def Q0(self) -> int:
        return int(self.Q(0))

    @property
    def preimage_ratio(self) -> Fraction:
        """Product of the roots of ``P - lambda Q`` divided by ``lambda``."""
        return Fraction((-1) ** (self.d + 1) * self.Q0, self.P_d)

    def mult_D(self, x: AlgNum) -> int:
        return root_multiplicity(self.char_D, x)

    def case_of(self, x: AlgNum) -> int:
        for y, c in self.exceptional:
            if y == x:
                return c
        return 1

    def to_dict(self) -> dict:
        return {
            "phi": {"num": _coeff_strs(self.phi.num), "den": _coeff_strs(self.phi.den)},
            "R": {"num": _coeff_strs(self.P), "den": _coeff_strs(self.Q)},
            "d": self.d,
            "P_d": self.P_d,
            "Q0": self.Q0,
            "sigma_D": [dict(x.to_json(), multiplicity=k) for x, k in self.sigma_D],
            "exceptional": [dict(x.to_json(), case=c) for x, c in self.exceptional],
        }


@dataclass(frozen=True)
class SpectrumTable:
    level: int
    A_set: tuple[tuple[AlgNum, int], ...]
    B_set: tuple[tuple[AlgNum, tuple[int, ...]], ...]
    zero_mult: int
    d: int

    def total(self) -> int:
        """Number of eigenvalues counted with multiplicity."""
        out = self.zero_mult + sum(k for _, k in self.A_set)
        for _, grid in self.B_set:
            out += sum(g * self.d**k for k, g in enumerate(grid))
        return out

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "zero_multiplicity": self.zero_mult,
            "A": [dict(x.to_json(), multiplicity=k) for x, k in self.A_set],
            "B": [dict(x.to_json(), grid=list(g)) for x, g in self.B_set],
            "total": self.total(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _coeff_strs(p: Poly) -> list[str]:
    return [str(c) for c in p.coeffs]


# -- Laplacians ---------------------------------------------------------------

def assemble_laplacian(g: Graph) -> RatMatrix:
    """Probabilistic Laplacian ``I - T^{-1} A`` with exact entries."""
    deg = g.degrees
    if any(k == 0 for k in deg):
        raise DecimationError(f"isolated vertex {deg.index(0)}")
    n = g.vertex_count
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = Fraction(1)
    for u, v, k in g.edges:
        rows[u][v] -= Fraction(k, deg[u])
        rows[v][u] -= Fraction(k, deg[v])
    return RatMatrix.from_rows(rows)


def _symmetric_laplacian(g: Graph) -> np.ndarray:
    deg = np.array(g.degrees, dtype=float)
    if np.any(deg == 0):
        raise DecimationError("isolated vertex")
    n = g.vertex_count
    adj = np.zeros((n, n))
    for u, v, k in g.edges:
        adj[u, v] += k
        adj[v, u] += k
    s = 1.0 / np.sqrt(deg)
    return np.eye(n) - adj * s[:, None] * s[None, :]


def spectrum_numeric(g: Graph) -> np.ndarray:
    """Ascending eigenvalues of the probabilistic Laplacian.

    ``I - T^{-1} A`` is similar to the symmetric ``I - T^{-1/2} A T^{-1/2}``,
    which is handed to a dense symmetric eigensolver.
    """
    return np.linalg.eigvalsh(_symmetric_laplacian(g))


# -- extraction ---------------------------------------------------------------

def _integer_pair(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    scale = lcm(*(c.denominator for c in num.coeffs + den.coeffs))
    ni = [int(c * scale) for c in num.coeffs]
    di = [int(c * scale) for c in den.coeffs]
    g = gcd(*ni, *di)
    if di[-1] < 0:
        g = -g
    return Poly(x // g for x in ni), Poly(x // g for x in di)


def _real_roots(p: Poly, hints) -> list[tuple[AlgNum, int]]:
    """Real roots of ``p`` with multiplicities, ascending."""
    usable = tuple(h for h in hints if h.divides(p))
    out = []
    for f in factor_rational_and_hinted(p, usable):
        if not f.certified:
            raise DecimationError(
                f"cannot certify an irreducible factor of {f.poly}; supply a factor hint")
        out.extend((x, f.multiplicity) for x in AlgNum.roots_of(f.poly))
    out.sort(key=lambda t: t[0])
    return out


def _classify(x: AlgNum, *, in_D: bool, phi: RatFunc, phiR_den: Poly, R: RatFunc,
              dR_num: Poly) -> int:
    phi_zero = vanishes_at(phi.num, x)
    phi_pole = vanishes_at(phi.den, x)
    phiR_pole = vanishes_at(phiR_den, x)
    R_pole = vanishes_at(R.den, x)
    R_removable = not R_pole and vanishes_at(R.unreduced_den(), x)
    if not in_D:
        if not phi_zero:
            raise DecimationError(f"{x} is not exceptional")
        if R_removable:
            return 2
        if R_pole:
            return 7
    elif phi_pole and phiR_pole and not R_pole:
        return 6 if vanishes_at(dR_num, x) else 3
    elif not phi_pole and not phiR_pole:
        if not phi_zero:
            return 4
        return 8 if R_pole else 5
    raise DecimationError(
        f"no case applies at {x}: phi_zero={phi_zero} phi_pole={phi_pole} "
        f"phiR_pole={phiR_pole} R_pole={R_pole} R_removable={R_removable}")


def extract_phi_R(g1: Graph, boundary: tuple[str, ...], hints=(),
                  expected_R: tuple[Poly, Poly] | None = None) -> DecimationData:
    """Schur complement, ``phi``, ``R``, ``sigma(D)`` and case tags from ``G_1``."""
    lap = assemble_laplacian(g1)
    bnd = [g1.marked[b] for b in boundary]
    nb = len(bnd)
    if nb < 2:
        raise DecimationError("need at least two boundary points")
    inner = [v for v in range(g1.vertex_count) if v not in set(bnd)]
    a_blk = lap.block(bnd, bnd)
    if a_blk != RatMatrix.identity(nb):
        raise DecimationError("boundary block is not the identity")
    b_blk = lap.block(bnd, inner)
    c_blk = lap.block(inner, bnd)
    d_blk = lap.block(inner, inner)
    ni = len(inner)

    z = Poly.z()
    d_minus_z = [[RatFunc(Poly((d_blk[i, j],)) - (z if i == j else 0)) for j in range(ni)]
                 for i in range(ni)]
    rhs = [[RatFunc.const(c_blk[i, j]) for j in range(nb)] for i in range(ni)]
    x = solve_linear_ratfunc(d_minus_z, rhs)
    s = [[RatFunc(Poly((a_blk[i, j],)) - (z if i == j else 0)) for j in range(nb)]
         for i in range(nb)]
    for i in range(nb):
        for j in range(nb):
            acc = s[i][j]
            for k in range(ni):
                if b_blk[i, k]:
                    acc = acc - x[k][j] * b_blk[i, k]
            s[i][j] = acc

    s_diag, s_off = s[0][0], s[0][1]
    for i in range(nb):
        for j in range(nb):
            if s[i][j] != (s_diag if i == j else s_off):
                raise DecimationError(f"Schur complement is not two-valued at ({i}, {j})")
    if s_off.is_zero():
        raise DecimationError("Schur complement is diagonal")

    phi = s_off * (-(nb - 1))
    diff = phi - s_diag
    # phi*R = phi - S_diag, unreduced over den(phi)*den(S_diag)
    phiR_den = phi.den * s_diag.den
    R = ratfunc_reduce(diff.num * phi.den, diff.den * phi.num)

    p0_off = Fraction(-1, nb - 1)
    for i in range(nb):
        for j in range(nb):
            expect = phi * (1 - R) if i == j else phi * p0_off
            if s[i][j] != expect:
                raise DecimationError("reconstruction S = phi (P0 - R) failed")

    P, Q = _integer_pair(R.num, R.den)
    if P.degree <= Q.degree:
        raise DecimationError("deg P must exceed deg Q")
    if P(0) != 0:
        raise DecimationError("R(0) != 0")
    if expected_R is not None:
        ep, eq = expected_R
        if P * eq != ep * Q:
            raise DecimationError(f"R = ({P})/({Q}) differs from the expected map")

    cd = char_poly(d_blk)
    sigma = _real_roots(cd, hints)
    if sum(k for _, k in sigma) != ni:
        raise DecimationError("sigma(D) has non-real or missing eigenvalues")

    dR_num = P.derivative() * Q - P * Q.derivative()
    pts: list[AlgNum] = [y for y, _ in sigma]
    for y, _ in _real_roots(phi.num, hints):
        if y not in pts:
            pts.append(y)
    pts.sort()
    in_D = {y: vanishes_at(cd, y) for y in pts}
    exceptional = tuple(
        (y, _classify(y, in_D=in_D[y], phi=phi, phiR_den=phiR_den, R=R, dR_num=dR_num)) for y in pts)
    return DecimationData(nb, phi, R, P, Q, s_diag, s_off, cd, tuple(sigma), exceptional,
                          tuple(hints))


def decimation_data(preset: FractalPreset) -> DecimationData:
    """Extraction for a preset, using its factor hints and expected map."""
    return _decimation_data_cached(preset)


@lru_cache(maxsize=None)
def _decimation_data_cached(preset: FractalPreset) -> DecimationData:
    g1 = build_level(preset, 1)
    ov = preset.decimation_override
    hints = ov.hints if ov else ()
    exp = ov.expected_R if ov else None
    try:
        return extract_phi_R(g1, tuple(preset.v0), hints, exp)
    except HintError as exc:
        raise DecimationError(str(exc)) from exc


# -- multiplicities -----------------------------------------------------------

class _Engine:
    """Memoized exact multiplicities ``mult_n(x)`` for one preset."""

    def __init__(self, dd: DecimationData, preset: FractalPreset):
        self.dd = dd
        self.preset = preset
        nb = dd.n_boundary
        self.top = AlgNum.from_rational(Fraction(nb, nb - 1))
        self.zero = AlgNum.from_rational(0)
        self.cases = {x: c for x, c in dd.exceptional}
        self._image: dict[AlgNum, object] = {}
        self._in_range: dict[AlgNum, bool] = {}
        self._mult: dict[tuple[int, AlgNum], int] = {}

    def image(self, x: AlgNum):
        r = self._image.get(x)
        if r is None:
            r = eval_at_algnum(self.dd.R, x)
            self._image[x] = r
        return r

    def in_range(self, x: AlgNum) -> bool:
        r = self._in_range.get(x)
        if r is None:
            r = x.in_closed_interval(0, 2)
            self._in_range[x] = r
        return r

    def mult(self, n: int, x) -> int:
        if x is POLE:
            return 0
        key = (n, x)
        got = self._mult.get(key)
        if got is None:
            got = self._mult_uncached(n, x)
            self._mult[key] = got
        return got

    def _mult_uncached(self, n: int, x: AlgNum) -> int:
        if not self.in_range(x):
            return 0
        if n == 0:
            if x == self.zero:
                return 1
            if x == self.top:
                return self.dd.n_boundary - 1
            return 0
        case = self.cases.get(x, 1)
        if case == 1:
            return self.mult(n - 1, self.image(x))
        m = self.preset.m
        v_prev = vertex_count_closed_form(self.preset, n - 1)
        md = self.dd.mult_D(x)
        if case == 7:
            return 0
        if case == 8:
            out = m ** (n - 1) * md
        elif case == 2:
            out = v_prev
        else:
            m_r = self.mult(n - 1, self.image(x))
            out = {
                3: m ** (n - 1) * md - v_prev + m_r,
                4: m ** (n - 1) * md + m_r,
                5: m ** (n - 1) * md + v_prev + m_r,
                6: m ** (n - 1) * md - v_prev + 2 * m_r,
            }[case]
        if out < 0:
            raise DecimationError(
                f"negative multiplicity {out} at level {n} for {x} (case {case})")
        return out

    def silent(self, n: int, x: AlgNum) -> bool:
        return all(self.mult(k, x) == 0 for k in range(n + 1))

    def preimage_poly(self, f: Poly) -> Poly:
        """Polynomial whose roots are all ``z`` with ``f(R(z)) = 0``."""
        P, Q = self.dd.P, self.dd.Q
        r = f.degree
        out = Poly()
        for i, c in enumerate(f.coeffs):
            if c:
                out = out + P**i * Q ** (r - i) * c
        return out

    def untracked_preimages(self, beta: AlgNum, tracked: set) -> list[AlgNum]:
        """Real preimages of ``beta`` in [0, 2] that are not yet tracked."""
        nf = self.preimage_poly(beta.min_poly)
        known = {t.min_poly for t in tracked if vanishes_at(nf, t)}
        out = []
        for y, _ in _real_roots(nf, self.dd.hints + tuple(known)):
            if y in tracked or not self.in_range(y):
                continue
            if self.image(y) == beta:
                out.append(y)
        return out

    # -- A/B structure ---------------------------------------------------
    def structure(self, n: int):
        """Tracked points and their A/B roles at level ``n``.

        Starts from 0, ``|V0|/(|V0|-1)`` and the exceptional set. A tracked
        point with a tracked preimage has its remaining real preimages
        promoted to tracked points; it is then an A-point. A tracked point
        with no tracked preimage is a B-root. Untracked points between a
        tracked point and a B-root further along its forward orbit are also
        promoted, so every chain below a B-root is free of tracked points.
        """
        tracked: set[AlgNum] = {self.zero, self.top}
        tracked.update(x for x, _ in self.dd.exceptional)
        expanded: set[AlgNum] = set()
        while True:
            changed = False
            by_image: dict[AlgNum, list[AlgNum]] = {}
            for t in tracked:
                img = self.image(t)
                if img is not POLE:
                    by_image.setdefault(img, []).append(t)
            for beta in sorted(tracked):
                if beta in expanded or beta not in by_image:
                    continue
                expanded.add(beta)
                if self.silent(n, beta):
                    continue
                new = self.untracked_preimages(beta, tracked)
                if new:
                    tracked.update(new)
                    changed = True
            if changed:
                continue
            b_roots = {t for t in tracked if t not in by_image}
            for t in sorted(tracked):
                path = []
                w = self.image(t)
                for _ in range(n):
                    if w is POLE or not self.in_range(w):
                        break
                    if w in tracked:
                        if path and w in b_roots:
                            tracked.update(path)
                            changed = True
                        break
                    path.append(w)
                    w = self.image(w)
            if not changed:
                break
        a_pts = sorted(t for t in tracked if t in by_image and t != self.zero)
        b_pts = sorted(t for t in tracked if t not in by_image)
        return a_pts, b_pts

    def table(self, n: int) -> SpectrumTable:
        a_pts, b_pts = self.structure(n)
        d = self.dd.d
        A = tuple((x, self.mult(n, x)) for x in a_pts)
        B = tuple((x, tuple(self.mult(n - k, x) for k in range(n + 1))) for x in b_pts)
        for x, grid in B:
            if any(grid):
                nf = self.preimage_poly(x.min_poly)
                if poly_gcd(nf, nf.derivative()).degree > 0:
                    raise DecimationError(f"preimages of B-root {x} are not distinct")
        tab = SpectrumTable(n, A, B, self.mult(n, self.zero), d)
        size = vertex_count_closed_form(self.preset, n)
        if tab.total() != size:
            raise DecimationError(
                f"dimension identity fails at level {n}: {tab.total()} != {size}")
        return tab


@lru_cache(maxsize=None)
def _engine(dd: DecimationData, preset: FractalPreset) -> _Engine:
    return _Engine(dd, preset)


def multiplicity_recursion(dd: DecimationData, preset: FractalPreset, n: int) -> SpectrumTable:
    """Exact spectrum of ``Delta_n`` organised into A- and B-sets."""
    if n < 0:
        raise ValueError("level must be non-negative")
    return _engine(dd, preset).table(n)


def mult_at(dd: DecimationData, preset: FractalPreset, n: int, x: AlgNum) -> int:
    """Multiplicity of ``x`` as an eigenvalue of ``Delta_n``."""
    return _engine(dd, preset).mult(n, x)


# -- numeric expansion --------------------------------------------------------

def numeric_preimages(dd: DecimationData, value, k: int, dps: int = 30) -> list:
    """All real ``z`` with ``R^k(z) = value``, by repeated polynomial root finding.

    Used for cross-checks only. A root finder failure emits a warning and
    drops that branch.
    """
    with mpmath.workdps(dps):
        if isinstance(value, Fraction):
            value = mpmath.mpf(value.numerator) / value.denominator
        level = [mpmath.mpf(value)]
        pc = [mpmath.mpf(int(c)) for c in dd.P.coeffs]
        qc = [mpmath.mpf(int(c)) for c in dd.Q.coeffs]
        tol = mpmath.mpf(10) ** (-(dps // 2))
        for _ in range(k):
            nxt = []
            for lam in level:
                coeffs = list(pc)
                for i, c in enumerate(qc):
                    coeffs[i] -= lam * c
                try:
                    roots = mpmath.polyroots(coeffs[::-1], maxsteps=200, extraprec=2 * dps)
                except mpmath.libmp.NoConvergence:
                    warnings.warn(f"root finder did not converge for lambda={lam}")
                    continue
                nxt.extend(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < tol)
            level = nxt
        return sorted(level)


def expand_numeric(dd: DecimationData, table: SpectrumTable, dps: int = 30) -> list[float]:
    """The full spectrum of a table as an ascending list of floats."""
    out = [0.0] * table.zero_mult
    for x, k in table.A_set:
        out.extend([float(x)] * k)
    for x, grid in table.B_set:
        for depth, g in enumerate(grid):
            if g:
                for y in numeric_preimages(dd, x.approx(dps), depth, dps):
                    out.extend([float(y)] * g)
    return sorted(out)
