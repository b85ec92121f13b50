"""Spanning-tree counts by three independent routes.

* matrix-tree: integer Bareiss determinant of a reduced combinatorial
  Laplacian;
* probabilistic Kirchhoff: degree prefactor times the product of the nonzero
  eigenvalues of ``I - T^{-1} A`` (floating point);
* decimation: the product over the A/B spectrum table, evaluated exactly by
  grouping conjugate eigenvalues into their norm.
"""

from __future__ import annotations

import json
import math
import sys
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import mpmath
import numpy as np

from .algebra import Poly, det_bareiss_int
from .decimation import DecimationData, SpectrumTable
from .graph import Graph

DIGIT_CAP = 200_000
TRIAL_LIMIT = 10**6


@lru_cache(maxsize=1)
def _primes() -> tuple[int, ...]:
    sieve = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(TRIAL_LIMIT**0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


def trial_factor(n: int) -> tuple[dict[int, int], int]:
    """Factor ``|n|`` by primes up to 10**6; returns (exponents, residue)."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    out: dict[int, int] = {}
    for p in _primes():
        if n == 1 or p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if 1 < n <= TRIAL_LIMIT**2:
        # no factor up to sqrt(n), so n is prime
        out[n] = out.get(n, 0) + 1
        n = 1
    return out, n


def int_str(v: int) -> str:
    """Decimal string of ``v``, bypassing the interpreter's digit limit."""
    get = getattr(sys, "get_int_max_str_digits", None)
    if get is None:
        return str(v)
    old = get()
    sys.set_int_max_str_digits(0)
    try:
        return str(v)
    finally:
        sys.set_int_max_str_digits(old)


@dataclass(frozen=True)
class FactoredCount:
    """A spanning-tree count in up to three forms.

    ``factorization`` holds ``(prime, exponent)`` pairs; ``residue`` is the
    part left unfactored (1 when the factorization is complete).
    """

    value: int | None
    factorization: tuple[tuple[int, int], ...] | None
    log_value: mpmath.mpf
    residue: int = 1

    @classmethod
    def from_int(cls, value: int, dps: int = 30) -> FactoredCount:
        if value <= 0:
            raise ValueError("spanning-tree counts are positive")
        exps, residue = trial_factor(value)
        with mpmath.workdps(dps + 10):
            logv = mpmath.log(mpmath.mpf(value))
        return cls(value, tuple(sorted(exps.items())), logv, residue)

    @classmethod
    def from_exponents(cls, exps: Mapping[int, int], dps: int = 30,
                       cap: int = DIGIT_CAP) -> FactoredCount:
        fact = tuple(sorted((p, e) for p, e in exps.items() if e))
        with mpmath.workdps(dps + 10):
            logv = mpmath.fsum(e * mpmath.log(p) for p, e in fact) if fact else mpmath.mpf(0)
        digits = sum(e * math.log10(p) for p, e in fact)
        value = None
        if digits <= cap:
            value = 1
            for p, e in fact:
                value *= p**e
        return cls(value, fact, logv)

    @property
    def approx(self) -> mpmath.mpf:
        return mpmath.exp(self.log_value)

    def product_string(self) -> str:
        if not self.factorization:
            return "1"
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in self.factorization]
        if self.residue != 1:
            parts.append(f"[{int_str(self.residue)}]")
        return " * ".join(parts)

    def to_dict(self, level: int, method: str) -> dict:
        return {
            "level": level,
            "method": method,
            "value": None if self.value is None else int_str(self.value),
            "factorization": None if self.factorization is None else
            [[str(p), str(e)] for p, e in self.factorization],
            "residue": int_str(self.residue),
            "log_value": mpmath.nstr(self.log_value, 20),
        }

    def to_json(self, level: int, method: str) -> str:
        return json.dumps(self.to_dict(level, method), indent=2) + "\n"


# -- matrix-tree --------------------------------------------------------------

def combinatorial_laplacian(g: Graph) -> list[list[int]]:
    n = g.vertex_count
    lap = [[0] * n for _ in range(n)]
    for u, v, k in g.edges:
        lap[u][v] -= k
        lap[v][u] -= k
        lap[u][u] += k
        lap[v][v] += k
    return lap


def matrix_tree_determinant(g: Graph, deleted: int = 0) -> int:
    """The cofactor of the combinatorial Laplacian at ``(deleted, deleted)``."""
    if not 0 <= deleted < g.vertex_count:
        raise ValueError("deleted vertex out of range")
    lap = combinatorial_laplacian(g)
    keep = [i for i in range(g.vertex_count) if i != deleted]
    return det_bareiss_int([[lap[i][j] for j in keep] for i in keep])


def count_matrix_tree(g: Graph, deleted: int = 0, dps: int = 30) -> FactoredCount:
    if not g.is_connected():
        raise ValueError("graph is disconnected")
    return FactoredCount.from_int(matrix_tree_determinant(g, deleted), dps)


# -- probabilistic Kirchhoff ----------------------------------------------------

def count_kirchhoff_probabilistic(g: Graph, spectrum, dps: int = 30) -> FactoredCount:
    """Log-domain evaluation of ``prod(d)/sum(d) * prod(nonzero eigenvalues)``.

    The eigenvalue closest to zero is dropped; the graph must be connected.
    """
    ev = sorted(float(x) for x in spectrum)
    if len(ev) != g.vertex_count:
        raise ValueError("spectrum size does not match the graph")
    zero = min(range(len(ev)), key=lambda i: abs(ev[i]))
    rest = ev[:zero] + ev[zero + 1:]
    deg = g.degrees
    with mpmath.workdps(dps + 10):
        terms = [mpmath.log(k) for k in deg]
        terms.append(-mpmath.log(sum(deg)))
        terms.extend(mpmath.log(abs(mpmath.mpf(x))) for x in rest)
        logv = mpmath.fsum(terms)
    return FactoredCount(None, None, logv)


# -- decimation -------------------------------------------------------------------

def _class_norm(f: Poly) -> Fraction:
    """Product of all complex roots of ``f``."""
    r = f.degree
    return Fraction((-1) ** r) * f.coeffs[0] / f.lead


def _preimage_exponent(grid, d: int) -> int:
    return sum(g * (d**k - 1) // (d - 1) for k, g in enumerate(grid))


class _ExponentBook:
    def __init__(self):
        self.exps: Counter = Counter()
        self.unfactored: Counter = Counter()

    def add(self, q: Fraction, e: int):
        if e == 0:
            return
        q = Fraction(q)
        if q == 0:
            raise ArithmeticError("zero factor in the decimation product")
        for part, sgn in ((q.numerator, 1), (q.denominator, -1)):
            f, res = trial_factor(part)
            for p, k in f.items():
                self.exps[p] += sgn * k * e
            if res != 1:
                self.unfactored[res] += sgn * e


def _grouped(entries):
    groups: dict[Poly, list] = {}
    for x, val in entries:
        groups.setdefault(x.min_poly, []).append(val)
    return groups


def count_decimation(dd: DecimationData, table: SpectrumTable, census: Mapping[int, int],
                     n: int, dps: int = 30, cap: int = DIGIT_CAP) -> FactoredCount:
    """Exact count from the spectrum table.

    Conjugate eigenvalues contribute through the norm of their minimal
    polynomial, which needs every root of that polynomial to appear with the
    same multiplicity (or grid). Otherwise only the logarithm is produced.
    """
    if table.level != n:
        raise ValueError("table level does not match n")
    logv = log_count(dd, table, census, n, dps)
    if n == 0:
        k = dd.n_boundary
        return FactoredCount.from_exponents(trial_factor(k**(k - 2))[0], dps, cap)
    book = _ExponentBook()
    for deg, cnt in census.items():
        book.add(Fraction(deg), cnt)
    book.add(Fraction(1, sum(deg * cnt for deg, cnt in census.items())), 1)

    d = dd.d
    rho = dd.preimage_ratio
    exact = True
    for f, mults in _grouped(table.A_set).items():
        if not any(mults):
            continue
        if len(mults) != f.degree or len(set(mults)) != 1:
            exact = False
            break
        book.add(_class_norm(f), mults[0])
    if exact:
        for f, grids in _grouped(table.B_set).items():
            if not any(any(g) for g in grids):
                continue
            if len(grids) != f.degree or len(set(grids)) != 1:
                exact = False
                break
            grid = grids[0]
            book.add(_class_norm(f), sum(grid))
            book.add(rho, f.degree * _preimage_exponent(grid, d))
    if not exact:
        warnings.warn("conjugate eigenvalues with differing multiplicities; log value only")
        return FactoredCount(None, None, logv)
    if book.unfactored:
        warnings.warn("decimation product has factors beyond the trial bound; log value only")
        return FactoredCount(None, None, logv)
    neg = {p: e for p, e in book.exps.items() if e < 0}
    if neg:
        raise ArithmeticError(f"decimation product is not an integer: negative exponents {neg}")
    out = FactoredCount.from_exponents(book.exps, dps, cap)
    return FactoredCount(out.value, out.factorization, logv)


def log_count(dd: DecimationData, table: SpectrumTable, census: Mapping[int, int],
              n: int, dps: int = 30) -> mpmath.mpf:
    """Natural logarithm of the count, summed eigenvalue by eigenvalue."""
    if n == 0:
        k = dd.n_boundary
        with mpmath.workdps(dps + 10):
            return (k - 2) * mpmath.log(k)
    d = dd.d
    with mpmath.workdps(dps + 10):
        rho = abs(dd.preimage_ratio)
        log_rho = mpmath.log(rho.numerator) - mpmath.log(rho.denominator)
        terms = [cnt * mpmath.log(deg) for deg, cnt in census.items()]
        terms.append(-mpmath.log(sum(deg * cnt for deg, cnt in census.items())))
        for x, k in table.A_set:
            if k:
                terms.append(k * mpmath.log(abs(x.approx(dps + 10))))
        for x, grid in table.B_set:
            if any(grid):
                terms.append(sum(grid) * mpmath.log(abs(x.approx(dps + 10))))
                terms.append(_preimage_exponent(grid, d) * log_rho)
        return mpmath.fsum(terms)
