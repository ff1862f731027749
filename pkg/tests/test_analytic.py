from fractions import Fraction
import math

import pytest

from railgauge import analytic
from railgauge.exceptions import InvalidModeCount


@pytest.mark.parametrize(
    ("n", "s_plus", "s_minus", "overall"),
    [
        (2, Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)),
        (3, Fraction(0), Fraction(2, 3), Fraction(1, 3)),
        (4, Fraction(3, 8), Fraction(3, 4), Fraction(9, 16)),
        (8, Fraction(35, 128), Fraction(7, 8), Fraction(147, 256)),
    ],
)
def test_totals(n, s_plus, s_minus, overall):
    assert analytic.s_plus_formula(n) == s_plus
    assert analytic.s_minus_formula(n) == s_minus
    assert analytic.overall_formula(n) == overall


@pytest.mark.parametrize("n", [5, 7, 9, 11])
def test_odd_overall(n):
    assert analytic.s_plus_formula(n) == 0
    assert analytic.overall_formula(n) == Fraction(n - 1, 2 * n)


@pytest.mark.parametrize("n", range(2, 17))
def test_sectors_sum_to_the_totals(n):
    sectors = range(n + 1)
    assert sum(analytic.sector_probability(n, i) for i in sectors) == 1
    assert (
        sum(analytic.sector_minus_formula(n, i) for i in sectors)
        == analytic.s_minus_formula(n)
    )
    assert (
        sum(analytic.sector_plus_formula(n, i) for i in sectors)
        == analytic.s_plus_formula(n)
    )


@pytest.mark.parametrize("n", range(2, 13))
def test_gamma_matches_bruteforce(n):
    for i in range(n + 1):
        assert analytic.gamma(n, i) == analytic.gamma_bruteforce(n, i)


@pytest.mark.parametrize("n", range(2, 13))
def test_sector_minus_is_the_overlap_bound(n):
    for i in range(n + 1):
        assert analytic.sector_minus_from_gamma(
            n, i
        ) == analytic.sector_minus_formula(n, i)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_half_filled_sector_is_perfect_for_minus(n):
    half = n // 2
    assert analytic.gamma(n, half) == 0
    assert analytic.sector_minus_formula(n, half) == analytic.sector_probability(
        n, half
    )


def test_endpoints_do_not_discriminate():
    for n in (2, 5, 8):
        for i in (0, n):
            assert analytic.sector_minus_formula(n, i) == 0
            assert analytic.gamma(n, i) ** 2 == 1


def test_sector_probability():
    assert analytic.sector_probability(4, 2) == Fraction(6, 16)
    assert analytic.sector_probability(10, 3) == Fraction(math.comb(10, 3), 1024)


def test_invalid_arguments():
    with pytest.raises(InvalidModeCount):
        analytic.s_plus_formula(1)
    with pytest.raises(InvalidModeCount):
        analytic.s_minus_formula(0)
    with pytest.raises(TypeError):
        analytic.overall_formula(4.0)
    with pytest.raises(InvalidModeCount):
        analytic.sector_minus_formula(4, 5)
    with pytest.raises(InvalidModeCount):
        analytic.gamma(4, -1)
    with pytest.raises(InvalidModeCount):
        analytic.gamma_bruteforce(analytic.MAX_BRUTEFORCE_MODES + 1, 1)


def test_hadamard12_table_is_consistent():
    table = analytic.HADAMARD12_TABLE
    totals = analytic.HADAMARD12_TOTALS
    assert [row.photons for row in table] == list(range(13))
    assert sum(row.s_plus for row in table) == totals["s_plus"]
    assert sum(row.s_minus for row in table) == totals["s_minus"]
    assert totals["s_plus"] + totals["f_plus"] == 1
    assert totals["s_minus"] + totals["f_minus"] == 1
    for row in table:
        assert row.s_minus <= analytic.sector_minus_formula(12, row.photons)
        assert row.s_plus <= analytic.sector_probability(12, row.photons)


def test_hadamard12_falls_short_of_the_qft():
    overall = (
        analytic.HADAMARD12_TOTALS["s_plus"] + analytic.HADAMARD12_TOTALS["s_minus"]
    ) / 2
    assert float(overall) == pytest.approx(0.3663, abs=5e-5)
    assert overall < analytic.overall_formula(12)


@pytest.mark.parametrize(
    ("n", "photons", "expected"),
    [
        (4, 1, Fraction(1, 2)),
        (12, 3, Fraction(1, 2)),
        (2, 1, 0),
        (3, 1, Fraction(1, 3)),
    ],
)
def test_gamma_values(n, photons, expected):
    assert analytic.gamma(n, photons) == expected
    assert analytic.gamma_bruteforce(n, photons) == expected
