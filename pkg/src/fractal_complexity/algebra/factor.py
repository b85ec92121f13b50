"""Partial factorization over Q sufficient for the spectra handled here.

Not a general factorizer: rational roots are extracted, caller-supplied hint
factors are divided out after verification, and quadratic factors with two
real roots are found by pairing isolated real roots and checking the
candidate exactly. A cubic residue has no rational root and is therefore irreducible;
anything left of degree >= 4 is returned flagged as not certified
irreducible.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Sequence

from .algnum import isolate_real_roots, sturm_sequence, count_roots
from .poly import Poly, squarefree_decomposition


class HintError(ValueError):
    pass


class Factor(NamedTuple):
    poly: Poly
    multiplicity: int
    certified: bool = True


def _refine(p: Poly, seq, a: Fraction, b: Fraction, width: Fraction):
    while b - a > width:
        mid = (a + b) / 2
        if p(mid) == 0:
            return mid, mid
        if count_roots(seq, a, mid) == 1:
            b = mid
        else:
            a = mid
    return a, b


def rational_roots(p: Poly) -> list[Fraction]:
    """Distinct rational roots of ``p``."""
    if p.degree <= 0:
        return []
    prim = p.primitive()
    lead = abs(int(prim.lead))
    seq = sturm_sequence(prim)
    # distinct rationals with denominators <= lead differ by >= 1/lead^2
    width = Fraction(1, 4 * lead * lead)
    out = []
    for a, b in isolate_real_roots(prim):
        if a == b:
            out.append(a)
            continue
        a, b = _refine(prim, seq, a, b, width)
        if a == b:
            out.append(a)
            continue
        cand = Fraction((a + b) / 2).limit_denominator(lead)
        if a < cand < b and prim(cand) == 0:
            out.append(cand)
    return sorted(out)


def _quadratic_split(p: Poly) -> list[Poly]:
    """Split off quadratic factors with real roots; returns factor list."""
    out = []
    while p.degree > 2:
        prim = p.primitive()
        lead = abs(int(prim.lead))
        roots = isolate_real_roots(prim)
        if len(roots) < 2:
            break
        seq = sturm_sequence(prim)
        bound = max(abs(x) for iv in roots for x in iv) + 1
        width = Fraction(1, 16 * lead * lead * (1 + 2 * int(bound) + 2))
        refined = [_refine(prim, seq, a, b, width) for a, b in roots]
        mids = [(a + b) / 2 for a, b in refined]
        found = None
        for i, j in combinations(range(len(mids)), 2):
            s = (mids[i] + mids[j]).limit_denominator(lead)
            q = (mids[i] * mids[j]).limit_denominator(lead)
            cand = Poly((q, -s, 1))
            if cand.divides(prim):
                found = cand
                break
        if found is None:
            break
        out.append(found.primitive())
        p = prim.exact_div(found)
    out.append(p)
    return out


def factor_rational_and_hinted(p: Poly, hints: Sequence[Poly] = ()) -> list[Factor]:
    """Factor ``p`` into (factor, multiplicity, certified) triples.

    Factors are primitive integer polynomials with positive leading
    coefficient; the product of ``factor**multiplicity`` equals ``p`` up to a
    constant. A hint that does not divide ``p`` raises :class:`HintError`.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    for h in hints:
        if h.degree < 1 or not h.divides(p):
            raise HintError(f"hint {h} does not divide {p}")
    collected: dict[Poly, list] = {}

    def add(f: Poly, k: int, certified: bool):
        f = f.primitive()
        if f in collected:
            collected[f][0] += k
        else:
            collected[f] = [k, certified]

    for s, k in squarefree_decomposition(p):
        rest = s
        for r in rational_roots(s):
            lin = Poly((-r, 1))
            rest = rest.exact_div(lin)
            add(lin, k, True)
        for h in hints:
            h = h.primitive()
            g = h.monic()
            if g.degree <= rest.degree and g.divides(rest):
                rest = rest.exact_div(g)
                add(h, k, True)
        if rest.degree <= 0:
            continue
        for piece in _quadratic_split(rest):
            if piece.degree <= 0:
                continue
            add(piece, k, piece.degree <= 3 or any(piece.primitive() == h.primitive() for h in hints))
    return sorted((Factor(f, k, c) for f, (k, c) in collected.items()),
                  key=lambda fac: (fac.poly.degree, [float(c) for c in fac.poly.coeffs]))
