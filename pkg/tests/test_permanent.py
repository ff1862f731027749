from itertools import permutations
import math

import numpy as np
import pytest

from railgauge.exceptions import DimensionMismatch
from railgauge.fock import AncillaSpec
from railgauge.fock import enumerate_patterns
from railgauge.fock import evolve
from railgauge.fock import input_polynomial
from railgauge.permanent import amplitude_oracle
from railgauge.permanent import permanent
from railgauge.permanent import transfer_matrix
from railgauge.unitaries import build_green_machine
from railgauge.unitaries import build_qft


def permanent_by_permutations(a):
    m = len(a)
    return sum(math.prod(a[i][s[i]] for i in range(m)) for s in permutations(range(m)))


def test_two_by_two():
    assert permanent([[1, 2], [3, 4]]) == 10


def test_all_ones_is_factorial():
    assert permanent(np.ones((5, 5))) == pytest.approx(120)


def test_identity_and_empty():
    assert permanent(np.eye(4)) == 1
    assert permanent(np.zeros((0, 0))) == 1


def test_matches_sum_over_permutations():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert permanent(a) == pytest.approx(permanent_by_permutations(a.tolist()))


def test_non_square_is_rejected():
    with pytest.raises(DimensionMismatch):
        permanent(np.ones((2, 3)))


def test_transfer_matrix_repeats_columns():
    U = build_green_machine(4)
    m = transfer_matrix(U, [1, 2], [2, 0, 0, 0])
    np.testing.assert_array_equal(m, [[0.5, 0.5], [0.5, 0.5]])


@pytest.mark.parametrize(
    "U", [build_green_machine(2), build_green_machine(4), build_qft(3), build_qft(5)]
)
@pytest.mark.parametrize("signal", [1, -1])
def test_oracle_agrees_with_polynomial_expansion(U, signal):
    spec = AncillaSpec(U.n, (signal,) + (1,) * (U.n - 1))
    out = evolve(input_polynomial(spec), U)
    for pattern in enumerate_patterns(U.n, U.n):
        assert amplitude_oracle(U, spec, pattern) == pytest.approx(
            out.amplitude(pattern), abs=1e-12
        )


def test_oracle_with_phase_and_mixed_signs():
    U = build_qft(4)
    spec = AncillaSpec(4, (1, -1, 1, -1), phi=0.9)
    out = evolve(input_polynomial(spec), U)
    for pattern in enumerate_patterns(4, 4):
        assert amplitude_oracle(U, spec, pattern) == pytest.approx(
            out.amplitude(pattern), abs=1e-12
        )


def test_oracle_gm2_single_photon():
    spec = AncillaSpec(2, (1, 1))
    assert amplitude_oracle(build_green_machine(2), spec, (1, 0)) == pytest.approx(
        1 / math.sqrt(2)
    )


def test_oracle_is_zero_above_the_photon_count():
    spec = AncillaSpec(2, (1, 1))
    assert amplitude_oracle(build_green_machine(2), spec, (2, 1)) == 0


def test_oracle_checks_dimensions():
    spec = AncillaSpec(3, (1, 1, 1))
    with pytest.raises(DimensionMismatch):
        amplitude_oracle(build_green_machine(2), spec, (1, 0))
    with pytest.raises(DimensionMismatch):
        amplitude_oracle(build_qft(3), spec, (1, 0))
