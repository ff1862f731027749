from fractions import Fraction
import math

import pytest

from railgauge.exceptions import InvalidModeCount
from railgauge.exceptions import InvalidPhase
from railgauge.exceptions import InvalidProbability
from railgauge.exceptions import NotDiscriminating
from railgauge.exceptions import RailgaugeError
from railgauge.validation import alpha_validator
from railgauge.validation import is_power_of_two
from railgauge.validation import mode_count_validator
from railgauge.validation import phi_validator
from railgauge.validation import probability_pair_validator
from railgauge.validation import validate_arguments


@pytest.mark.parametrize("n", [1, 2, 4, 8, 1024])
def test_powers_of_two(n):
    assert is_power_of_two(n)


@pytest.mark.parametrize("n", [0, 3, 6, 12, -4])
def test_not_powers_of_two(n):
    assert not is_power_of_two(n)


@pytest.mark.parametrize("n", [2.0, "4", True, None])
def test_mode_count_must_be_an_integer(n):
    with pytest.raises(TypeError):
        mode_count_validator(n)


@pytest.mark.parametrize("n", [0, -3])
def test_mode_count_must_be_positive(n):
    with pytest.raises(InvalidModeCount):
        mode_count_validator(n)


@pytest.mark.parametrize("phi", [-0.1, 2 * math.pi, 7.0])
def test_phi_outside_range_is_rejected(phi):
    with pytest.raises(InvalidPhase):
        phi_validator(phi)


def test_phi_range_is_half_open():
    phi_validator(0)
    phi_validator(math.nextafter(2 * math.pi, 0))


def test_negative_probability_is_rejected():
    with pytest.raises(InvalidProbability, match="p_minus"):
        probability_pair_validator(Fraction(1, 2), -1e-3)


def test_zero_alpha_cannot_discriminate():
    with pytest.raises(NotDiscriminating):
        alpha_validator(0)
    alpha_validator(-2)


def test_domain_errors_are_also_builtin_errors():
    with pytest.raises(ValueError):
        mode_count_validator(0)
    with pytest.raises(RailgaugeError):
        phi_validator(-1.0)


def test_validators_receive_arguments_by_name_with_defaults_applied():
    seen = []

    def cutoff_validator(cutoff):
        seen.append(cutoff)

    @validate_arguments(mode_count_validator, cutoff_validator)
    def f(n, cutoff=7):
        return n

    assert f(3) == 3
    assert f(n=5, cutoff=2) == 5
    assert seen == [7, 2]
    with pytest.raises(InvalidModeCount):
        f(0)
