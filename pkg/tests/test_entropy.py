from fractions import Fraction

import mpmath
import pytest

from fractal_complexity.entropy import (
    ExponentFit,
    FitRefusal,
    bounds,
    complexity_sequence,
    entropy_report,
    fit_exponent_pattern,
    level_count,
)
from fractal_complexity.graph import FractalPreset
from fractal_complexity.presets import SG, SG3, TREE3
from fractal_complexity.treecount import FactoredCount

TOL30 = mpmath.mpf(10) ** -30


@pytest.fixture(autouse=True)
def _precision():
    with mpmath.workdps(50):
        yield


def sg3_limit():
    L = mpmath.log
    return (mpmath.mpf(2) / 7 * L(2) + mpmath.mpf(13) / 35 * L(3)
            + mpmath.mpf(3) / 35 * L(5) + mpmath.mpf(1) / 5 * L(7))


TRIANGLE = FractalPreset("triangle", 3, ("0", "1"),
                         ((0, "1", 1, "0"), (1, "1", 2, "1"), (0, "0", 2, "0")),
                         {"0": (0, "0"), "1": (1, "1")})
PATH = FractalPreset("path", 2, ("0", "1"), ((0, "1", 1, "0"),), {"0": (0, "0"), "1": (1, "1")})


def test_sg3_first_term():
    (n, c1), = complexity_sequence(SG3, 1)
    assert n == 1
    assert abs(c1 - mpmath.log(5292) / 10) < TOL30
    assert abs(c1 - mpmath.mpf("0.857395152523")) < 1e-12


def test_sg3_limit_by_fit():
    rep = entropy_report(SG3, 6)
    assert rep.method == "fit"
    assert abs(rep.limit_estimate - sg3_limit()) < TOL30
    assert abs(rep.sequence[-1][1] - sg3_limit()) < 1e-3
    coeffs = {p: (a, b, g) for p, a, b, g in rep.fit.coefficients}
    assert coeffs == {
        2: (Fraction(2, 5), 0, Fraction(-2, 5)),
        3: (Fraction(13, 25), Fraction(-3, 5), Fraction(12, 25)),
        5: (Fraction(3, 25), Fraction(-3, 5), Fraction(-3, 25)),
        7: (Fraction(7, 25), Fraction(3, 5), Fraction(-7, 25)),
    }


def test_tree_sequence_and_limit():
    seq = complexity_sequence(TREE3, 7)
    for n, c in seq:
        assert abs(c - 3**n * mpmath.log(3) / (1 + 2 * 3**n)) < TOL30
    assert abs(seq[-1][1] - mpmath.log(3) / 2) < 2e-4
    rep = entropy_report(TREE3, 6)
    assert rep.method == "fit"
    assert abs(rep.limit_estimate - mpmath.log(3) / 2) < TOL30
    assert [(p, a) for p, a, _, _ in rep.fit.coefficients] == [(3, 1)]


def test_sg_limit():
    rep = entropy_report(SG, 6)
    assert rep.method == "fit"
    L = mpmath.log
    # known constant of the standard gasket
    want = L(2) / 3 + L(3) / 2 + L(5) / 6
    assert abs(rep.limit_estimate - want) < TOL30
    assert abs(rep.limit_estimate - mpmath.mpf("1.04859485659305")) < 1e-13


def test_bounds_triangular():
    lo, hi = bounds(SG3)
    assert abs(lo - mpmath.log(3) / 2) < TOL30
    assert abs(hi - mpmath.log(mpmath.mpf(30) / 7)) < TOL30
    assert abs(hi - mpmath.mpf("1.455287")) < 1e-6
    lo, hi = bounds(TREE3)
    assert abs(hi - mpmath.log(3)) < TOL30


def test_sg3_sequence_inside_bounds():
    lo, hi = bounds(SG3)
    seq = complexity_sequence(SG3, 6)
    assert all(lo <= c for _, c in seq)
    assert seq[-1][1] <= hi
    assert all(c <= hi + mpmath.mpf("0.25") for _, c in seq)


def test_tree_limit_sits_on_the_lower_bound():
    # the finite terms approach ln3/2 from below; only the limit meets the bound
    lo, _ = bounds(TREE3)
    seq = complexity_sequence(TREE3, 5)
    assert all(c < lo for _, c in seq)
    assert abs(entropy_report(TREE3, 5).limit_estimate - lo) < TOL30


def test_two_point_bounds():
    lo, hi = bounds(TRIANGLE)
    assert abs(lo - 2 * mpmath.log(3) / 3) < TOL30
    assert abs(hi - mpmath.log(4)) < TOL30
    lo, _ = bounds(PATH)
    assert lo == 0
    rep = entropy_report(PATH, 5)
    assert all(abs(c) < 1e-30 for _, c in rep.sequence)


def test_fit_refuses_corrupted_exponent():
    counts = [(n, level_count(SG3, n)) for n in range(2, 6)]
    fact = dict(counts[-1][1].factorization)
    fact[7] += 1
    counts[-1] = (5, FactoredCount.from_exponents(fact))
    got = fit_exponent_pattern(SG3, counts)
    assert isinstance(got, FitRefusal)
    assert "7" in got.reason


def test_fit_needs_four_levels():
    counts = [(n, level_count(SG3, n)) for n in range(2, 5)]
    assert isinstance(fit_exponent_pattern(SG3, counts), FitRefusal)
    counts = [(n, level_count(SG3, n)) for n in (2, 3, 4, 6)]
    assert isinstance(fit_exponent_pattern(SG3, counts), FitRefusal)


def test_fit_accepts_clean_counts():
    counts = [(n, level_count(SG3, n)) for n in range(2, 6)]
    got = fit_exponent_pattern(SG3, counts)
    assert isinstance(got, ExponentFit)
    assert got.levels == (2, 3, 4, 5)


def test_short_report_is_last_term():
    rep = entropy_report(SG3, 4)
    assert rep.method == "last-term"
    assert rep.limit_estimate == rep.sequence[-1][1]
    assert rep.error_estimate is not None
    assert abs(rep.limit_estimate - sg3_limit()) < 1e-2


def test_report_json_is_stable():
    a = entropy_report(SG3, 5).to_json()
    assert a == entropy_report(SG3, 5).to_json()
    assert '"method": "fit"' in a


def test_sequence_rejects_zero_levels():
    with pytest.raises(ValueError):
        complexity_sequence(SG3, 0)
