"""Closed-form success rates for QFT and Green Machine measurements.

Everything here is exact rational arithmetic; the functions are the
reference values the simulated reports are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
import math

from .exceptions import InvalidModeCount
from .validation import mode_count_validator
from .validation import validate_arguments

MAX_BRUTEFORCE_MODES = 16


def _at_least_two(n: int) -> None:
    mode_count_validator(n)
    if n < 2:
        raise InvalidModeCount(f"the rate formulas need n >= 2, got {n}")


def _sector_validator(n: int, photons: int) -> None:
    mode_count_validator(n)
    if not 0 <= photons <= n:
        raise InvalidModeCount(f"photon number {photons} outside 0..{n}")


@validate_arguments(_at_least_two)
def s_plus_formula(n: int) -> Fraction:
    """``n! / (2^n ((n/2)!)^2)`` for even ``n``, zero for odd ``n``."""
    if n % 2:
        return Fraction(0)
    return Fraction(math.comb(n, n // 2), 2**n)


@validate_arguments(_at_least_two)
def s_minus_formula(n: int) -> Fraction:
    return Fraction(n - 1, n)


@validate_arguments(_at_least_two)
def overall_formula(n: int) -> Fraction:
    """Equal-prior success rate; ``(n-1)/(2n)`` for odd ``n``."""
    if n % 2:
        return Fraction(n - 1, 2 * n)
    return (s_plus_formula(n) + s_minus_formula(n)) / 2


@validate_arguments(_sector_validator)
def sector_probability(n: int, photons: int) -> Fraction:
    return Fraction(math.comb(n, photons), 2**n)


@validate_arguments(_sector_validator)
def sector_minus_formula(n: int, photons: int) -> Fraction:
    """``4 (n - I) I C(n, I) / (2^n n^2)``."""
    return Fraction(4 * (n - photons) * photons * math.comb(n, photons), 2**n * n * n)


@validate_arguments(_sector_validator)
def sector_plus_formula(n: int, photons: int) -> Fraction:
    """Only the half-filled sector discriminates ``|+>``, and perfectly."""
    if 2 * photons == n:
        return sector_probability(n, photons)
    return Fraction(0)


@validate_arguments(_sector_validator)
def gamma(n: int, photons: int) -> Fraction:
    """Overlap of the normalised ``I``-photon projections of the hypotheses."""
    return Fraction(n - 2 * photons, n)


@validate_arguments(_sector_validator)
def gamma_bruteforce(n: int, photons: int) -> Fraction:
    """The same overlap, summed over all ``C(n, I)`` occupation sets.

    A set containing the signal mode flips sign between the hypotheses.
    """
    if n > MAX_BRUTEFORCE_MODES:
        raise InvalidModeCount(
            f"brute force overlap limited to n <= {MAX_BRUTEFORCE_MODES}, got {n}"
        )
    total = 0
    count = 0
    for occupied in combinations(range(n), photons):
        total += -1 if 0 in occupied else 1
        count += 1
    return Fraction(total, count)


@validate_arguments(_sector_validator)
def sector_minus_from_gamma(n: int, photons: int) -> Fraction:
    """Optimal unambiguous discrimination rate of one sector, ``P (1 - gamma^2)``."""
    g = gamma(n, photons)
    return sector_probability(n, photons) * (1 - g * g)


@dataclass(frozen=True)
class Hadamard12Row:
    photons: int
    s_plus: Fraction
    s_minus: Fraction


def _f(text: str) -> Fraction:
    return Fraction(text)


HADAMARD12_TABLE = tuple(
    Hadamard12Row(i, _f(plus), _f(minus))
    for i, plus, minus in (
        (0, "0", "0"),
        (1, "0", "11/12288"),
        (2, "0", "55/6144"),
        (3, "0", "1375/36864"),
        (4, "0", "605/6912"),
        (5, "0", "7535/55296"),
        (6, "121385/884736", "16093/110592"),
        (7, "0", "210595/1990656"),
        (8, "0", "3685/73728"),
        (9, "774455/214990848", "2291245/143327232"),
        (10, "9295/143327232", "1817585/573308928"),
        (11, "6325/214990848", "3182113/10319560704"),
        (12, "0", "0"),
    )
)

HADAMARD12_TOTALS = {
    "s_plus": Fraction(6731395, 47775744),
    "s_minus": Fraction(6106045627, 10319560704),
    "f_plus": Fraction(41044349, 47775744),
    "f_minus": Fraction(4213515077, 10319560704),
}
