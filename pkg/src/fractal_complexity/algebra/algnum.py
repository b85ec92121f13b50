"""Real algebraic numbers as (minimal polynomial, isolating interval)."""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

import mpmath

from .linalg import RatMatrix, char_poly
from .poly import Poly, RatFunc, poly_xgcd, squarefree_part


def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = -(seq[-2] % seq[-1])
        if r.is_zero():
            break
        seq.append(r)
    return seq


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(seq: list[Poly], x: Fraction) -> int:
    signs = [s for s in (_sign(q(x)) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(seq: list[Poly], a: Fraction, b: Fraction) -> int:
    """Distinct real roots in the half-open interval ``(a, b]``."""
    return _variations(seq, a) - _variations(seq, b)


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root has ``|x| < bound``."""
    lead = abs(p.lead)
    return 1 + max((abs(c) / lead for c in p.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals for the distinct real roots of ``p``, ascending.

    A rational root found exactly is returned as a degenerate ``(r, r)``.
    Other intervals are open with a sign change of the squarefree part at both
    ends.
    """
    if p.degree <= 0:
        return []
    sq = squarefree_part(p)
    seq = sturm_sequence(sq)
    bound = root_bound(sq)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        k = count_roots(seq, a, b)
        if k == 0:
            continue
        if k == 1:
            if sq(b) == 0:
                out.append((b, b))
                continue
            if sq(a) != 0:
                out.append((a, b))
                continue
            # the left end is a neighbouring root: bisect until it is not
        mid = (a + b) / 2
        stack.append((a, mid))
        stack.append((mid, b))
    out.sort()
    return out


class PoleType:
    """Marker returned when a rational function is evaluated at one of its poles."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "POLE"


POLE = PoleType()


@total_ordering
class AlgNum:
    """A real root of an irreducible integer polynomial.

    ``lo < hi`` bracket exactly one real root of ``min_poly`` (with a sign
    change), except for rational values where ``lo == hi`` is the value.
    Refinement returns new objects; the represented number never changes.
    """

    __slots__ = ("min_poly", "lo", "hi")

    def __init__(self, min_poly: Poly, lo, hi, *, check: bool = True):
        mp = min_poly.primitive()
        lo, hi = Fraction(lo), Fraction(hi)
        if check:
            if mp.degree < 1:
                raise ValueError("minimal polynomial must have positive degree")
            if mp.degree == 1:
                root = -mp.coeffs[0] / mp.coeffs[1]
                if not lo <= root <= hi:
                    raise ValueError("interval does not contain the rational root")
                lo = hi = root
            elif not (lo < hi and _sign(mp(lo)) * _sign(mp(hi)) < 0):
                raise ValueError("interval does not isolate a root with a sign change")
            elif count_roots(sturm_sequence(mp), lo, hi) != 1:
                raise ValueError("interval contains more than one root")
        object.__setattr__(self, "min_poly", mp)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("AlgNum is immutable")

    # -- construction ----------------------------------------------------
    @classmethod
    def from_rational(cls, q) -> AlgNum:
        q = Fraction(q)
        return cls(Poly((-q, 1)), q, q, check=False)

    @classmethod
    def roots_of(cls, p: Poly) -> list[AlgNum]:
        """All real roots of an irreducible ``p``, ascending."""
        p = p.primitive()
        if p.degree == 1:
            return [cls.from_rational(-p.coeffs[0] / p.coeffs[1])]
        return [cls(p, a, b, check=False) for a, b in isolate_real_roots(p)]

    # -- queries ---------------------------------------------------------
    @property
    def degree(self) -> int:
        return self.min_poly.degree

    @property
    def is_rational(self) -> bool:
        return self.min_poly.degree == 1

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self!r} is irrational")
        return self.lo

    def refined(self) -> AlgNum:
        if self.is_rational:
            return self
        mid = (self.lo + self.hi) / 2
        s_mid = _sign(self.min_poly(mid))
        if s_mid * _sign(self.min_poly(self.lo)) < 0:
            return AlgNum(self.min_poly, self.lo, mid, check=False)
        return AlgNum(self.min_poly, mid, self.hi, check=False)

    def refined_to(self, width: Fraction) -> AlgNum:
        x = self
        while x.hi - x.lo > width:
            x = x.refined()
        return x

    def approx(self, dps: int = 30) -> mpmath.mpf:
        """Value to roughly ``dps`` significant digits beyond the integer part."""
        if self.is_rational:
            q = self.lo
            with mpmath.workdps(dps + 10):
                return mpmath.mpf(q.numerator) / q.denominator
        x = self.refined_to(Fraction(1, 10 ** (dps + 8)))
        with mpmath.workdps(dps + 10):
            return (mpmath.mpf(x.lo.numerator) / x.lo.denominator
                    + mpmath.mpf(x.hi.numerator) / x.hi.denominator) / 2

    def __float__(self) -> float:
        if self.is_rational:
            return float(self.lo)
        return float(self.approx(20))

    def sign(self) -> int:
        return self.compare(Fraction(0))

    def compare(self, q) -> int:
        """Sign of ``self - q`` for a rational ``q``."""
        q = Fraction(q)
        if self.is_rational:
            return _sign(self.lo - q)
        if self.min_poly(q) == 0:
            raise AssertionError("rational root of an irreducible polynomial")
        x = self
        while x.lo <= q <= x.hi:
            x = x.refined()
        return 1 if x.lo > q else -1

    def in_closed_interval(self, a, b) -> bool:
        return self.compare(a) >= 0 and self.compare(b) <= 0

    # -- equality and order ---------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.lo == other
        if not isinstance(other, AlgNum):
            return NotImplemented
        if self.min_poly != other.min_poly:
            return False
        if self.is_rational:
            return self.lo == other.lo
        a, b = max(self.lo, other.lo), min(self.hi, other.hi)
        if a > b:
            return False
        if a == b:
            return False  # open intervals touching at an endpoint
        return _sign(self.min_poly(a)) * _sign(self.min_poly(b)) < 0

    def __hash__(self) -> int:
        if self.is_rational:
            return hash(self.lo)
        return hash(self.min_poly)

    def __lt__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.compare(other) < 0
        if self == other:
            return False
        if other.is_rational:
            return self.compare(other.lo) < 0
        if self.is_rational:
            return other.compare(self.lo) > 0
        x, y = self, other
        while not (x.hi < y.lo or y.hi < x.lo):
            x, y = x.refined(), y.refined()
        return x.hi < y.lo

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgNum({self.lo})"
        return f"AlgNum({self.min_poly}, ~{mpmath.nstr(self.approx(12), 12)})"

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.lo)
        return f"root({self.min_poly}) ~ {mpmath.nstr(self.approx(12), 12)}"

    def to_json(self) -> dict:
        return {
            "min_poly": [str(int(c)) for c in self.min_poly.coeffs],
            "interval": [str(self.lo), str(self.hi)],
        }


def _interval_eval(p: Poly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of ``p([lo, hi])`` by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(p.coeffs):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def field_element(h: Poly, x: AlgNum) -> AlgNum:
    """The real number ``h(x)`` for ``h`` reduced modulo ``x.min_poly``."""
    if h.degree <= 0:
        return AlgNum.from_rational(h.coeffs[0] if h.coeffs else 0)
    if x.is_rational:
        return AlgNum.from_rational(h(x.lo))
    mp = x.min_poly
    r = mp.degree
    # columns: coordinates of h*y^j mod mp in the power basis
    cols = []
    for j in range(r):
        v = (h * Poly.z() ** j) % mp
        cols.append(list(v.coeffs) + [Fraction(0)] * (r - len(v.coeffs)))
    mat = RatMatrix.from_rows([[cols[j][i] for j in range(r)] for i in range(r)])
    target = squarefree_part(char_poly(mat)).primitive()
    if target.degree == 1:
        return AlgNum.from_rational(-target.coeffs[0] / target.coeffs[1])
    seq = sturm_sequence(target)
    while True:
        a, b = _interval_eval(h, x.lo, x.hi)
        if a < b and target(a) != 0 and target(b) != 0 and count_roots(seq, a, b) == 1:
            return AlgNum(target, a, b, check=False)
        x = x.refined()


def eval_at_algnum(f: RatFunc, x: AlgNum):
    """Exact value ``f(x)`` as an :class:`AlgNum`, or :data:`POLE`."""
    if x.is_rational:
        q = x.lo
        d = f.den(q)
        if d == 0:
            return POLE
        return AlgNum.from_rational(f.num(q) / d)
    mp = x.min_poly
    dr = f.den % mp
    if dr.is_zero():
        return POLE
    nr = f.num % mp
    g, s, _ = poly_xgcd(dr, mp)
    if g.degree != 0:
        raise ArithmeticError("minimal polynomial is not irreducible")
    h = (nr * s) % mp
    return field_element(h, x)


def vanishes_at(p: Poly, x: AlgNum) -> bool:
    """Exact test ``p(x) == 0``."""
    if x.is_rational:
        return p(x.lo) == 0
    return (p % x.min_poly).is_zero()


def root_multiplicity(p: Poly, x: AlgNum) -> int:
    if p.is_zero():
        raise ValueError("every number is a root of the zero polynomial")
    mp = x.min_poly
    k = 0
    while True:
        q, r = divmod(p, mp)
        if r:
            return k
        p, k = q, k + 1
