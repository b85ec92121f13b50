"""Exact dense linear algebra: rational matrices, Bareiss determinants,
characteristic polynomials and linear solves over the field Q(z)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .poly import Poly, RatFunc


class SingularSystemError(ArithmeticError):
    pass


@dataclass(frozen=True)
class RatMatrix:
    """Dense row-major matrix of Fractions."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> RatMatrix:
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, tuple(Fraction(x) for row in rows for x in row))

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, values: Sequence) -> RatMatrix:
        n = len(values)
        return cls.from_rows([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def block(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> RatMatrix:
        return RatMatrix.from_rows([[self[i, j] for j in col_idx] for i in row_idx]) \
            if row_idx else RatMatrix(0, len(col_idx), ())

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))


def det_bareiss_int(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of an integer matrix by Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        ak = a[k]
        piv = ak[k]
        tail = ak[k + 1:]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            if aik:
                ai[k + 1:] = [(piv * x - aik * y) // prev
                              for x, y in zip(ai[k + 1:], tail)]
            elif piv != prev:
                ai[k + 1:] = [piv * x // prev for x in ai[k + 1:]]
            ai[k] = 0
        prev = piv
    return sign * a[n - 1][n - 1]


def det_bareiss_poly(rows: Sequence[Sequence[Poly]]) -> Poly:
    """Exact determinant of a polynomial matrix; every division is exact."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return Poly((1,))
    sign = 1
    prev = Poly((1,))
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Poly()
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                a[i][j] = (piv * a[i][j] - aik * a[k][j]).exact_div(prev)
            a[i][k] = Poly()
        prev = piv
    return a[n - 1][n - 1] * sign


def char_poly(m: RatMatrix) -> Poly:
    """Monic characteristic polynomial ``det(z I - M)``.

    The matrix is scaled to integers by the common denominator ``L``; the
    polynomial determinant of ``zI - L M`` is taken fraction-free and then
    rescaled via ``z -> L z``.
    """
    if not m.is_square:
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    if n == 0:
        return Poly((1,))
    scale = lcm(*(x.denominator for x in m.entries))
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            c = -m[i, j] * scale
            row.append(Poly((c, 1)) if i == j else Poly((c,)))
        rows.append(row)
    c = det_bareiss_poly(rows)
    # det(zI - LM) = L^n * charM(z/L)  =>  charM(z) = L^{-n} * c(L z)
    return c.scale_argument(scale) * Fraction(1, scale**n)


def solve_linear_ratfunc(a: Sequence[Sequence[RatFunc]],
                         b: Sequence[Sequence[RatFunc]]) -> list[list[RatFunc]]:
    """Solve ``A X = B`` over the field of rational functions Q(z).

    Gauss-Jordan elimination; a pivot is any entry that is not the zero
    function. Raises :class:`SingularSystemError` if ``A`` is identically
    singular.
    """
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("system matrix must be square")
    if len(b) != n:
        raise ValueError("right-hand side has the wrong number of rows")
    ncols = len(b[0]) if n else 0
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    for k in range(n):
        piv_row = next((i for i in range(k, n) if not aug[i][k].is_zero()), None)
        if piv_row is None:
            raise SingularSystemError("system is singular for every z")
        aug[k], aug[piv_row] = aug[piv_row], aug[k]
        inv = 1 / aug[k][k]
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i == k or aug[i][k].is_zero():
                continue
            f = aug[i][k]
            aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return [row[n:n + ncols] for row in aug]
