from fractions import Fraction
import math

import pytest

from railgauge import coherent
from railgauge.coherent import CoherentConfig
from railgauge.exceptions import InvalidAmplitude
from railgauge.exceptions import InvalidModeCount
from railgauge.exceptions import NotDiscriminating


@pytest.mark.parametrize("order", [0, 1, 2, 5])
@pytest.mark.parametrize("x", [0.0, 0.5, 1.0, 4.0, 9.0])
def test_bessel_i_matches_scipy(order, x):
    special = pytest.importorskip("scipy.special")
    assert coherent.bessel_i(order, x) == pytest.approx(special.iv(order, x), rel=1e-12)


def test_bessel_i_rejects_negative_arguments():
    with pytest.raises(ValueError):
        coherent.bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        coherent.bessel_i(1, -1.0)


@pytest.mark.parametrize("order", [0, 1, 4])
@pytest.mark.parametrize("x", [0.0, 1.0, 9.0, 400.0])
def test_scaled_bessel_i_matches_scipy(order, x):
    special = pytest.importorskip("scipy.special")
    got = coherent.bessel_i(order, x, scaled=True)
    assert got == pytest.approx(special.ive(order, x), rel=1e-10)


def test_scaled_bessel_i_stays_finite():
    assert coherent.bessel_i(2, 9.0, scaled=True) == pytest.approx(
        math.exp(-9.0) * coherent.bessel_i(2, 9.0), rel=1e-12
    )
    big = coherent.bessel_i(30, 900.0, scaled=True)
    assert 0 < big < 1
    assert coherent.bs_coherent_success(30) == pytest.approx(2 * big, rel=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3, -2])
def test_beam_splitter_closed_form(alpha):
    a = abs(alpha)
    expected = 2 * math.exp(-a * a) * coherent.bessel_i(a, a * a)
    assert coherent.bs_coherent_success(alpha) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("alpha", [1, 2, 3])
def test_beam_splitter_series_converges_to_closed_form(alpha):
    series = coherent.bs_coherent_series(alpha, coherent.default_cutoff(alpha))
    assert series == pytest.approx(coherent.bs_coherent_success(alpha), abs=1e-12)


def test_beam_splitter_at_alpha_one():
    assert coherent.bs_coherent_success(1) == pytest.approx(0.4158, abs=1e-4)


def test_beam_splitter_fock_simulation():
    sim = coherent.bs_coherent_success_sim(1, 12, method="fock_sim")
    assert sim == pytest.approx(coherent.bs_coherent_success(1), abs=1e-6)
    assert coherent.bs_coherent_success_sim(1) == pytest.approx(
        coherent.bs_coherent_success(1), abs=1e-12
    )
    with pytest.raises(ValueError):
        coherent.bs_coherent_success_sim(1, method="bogus")


def test_beam_splitter_needs_integer_alpha():
    with pytest.raises(NotDiscriminating):
        coherent.bs_coherent_success(0.5)
    with pytest.raises(NotDiscriminating):
        coherent.bs_coherent_success(0)


def test_green_machine_of_two_is_the_beam_splitter():
    p_plus, p_minus = coherent.gm_coherent_success(2, 2)
    expected = coherent.bs_coherent_success(2)
    assert p_plus == pytest.approx(expected, rel=1e-10)
    assert p_minus == pytest.approx(expected, rel=1e-10)


def test_green_machine_four_at_one_third():
    p_plus, p_minus = coherent.gm_coherent_success(4, Fraction(1, 3))
    assert p_plus == pytest.approx(0.358285, abs=1e-6)
    assert p_minus == pytest.approx(0.003732, abs=1e-6)


def test_green_machine_four_at_one():
    p_plus, p_minus = coherent.gm_coherent_success(4, 1)
    assert p_plus == pytest.approx(0.202604, abs=1e-4)
    assert p_minus == pytest.approx(0.129114, abs=1e-4)


def test_green_machine_simulation_agrees_with_closed_form():
    closed = coherent.gm_coherent_success(4, Fraction(1, 3))
    sim = coherent.gm_coherent_success_sim(4, Fraction(1, 3), 10)
    assert sim == pytest.approx(closed, abs=1e-8)


def test_off_lattice_alpha_warns():
    with pytest.warns(UserWarning, match="no click pattern"):
        assert coherent.gm_coherent_success(4, 0.3, 20) == (0.0, 0.0)


def test_green_machine_arguments():
    with pytest.raises(NotDiscriminating):
        coherent.gm_coherent_success(4, 0)
    with pytest.raises(InvalidModeCount):
        coherent.gm_coherent_success(1, 1)


def test_loading_probability():
    probability, state = coherent.loading_probability(1, 1, 0, 1, 0)
    assert probability == pytest.approx(math.exp(-1) / 2)
    assert state == (1, 0)


def test_loading_heralds_the_qubit():
    s = 1 / math.sqrt(2)
    probability, (zero, one) = coherent.loading_probability(1, 2, 1, s, s)
    assert zero == pytest.approx(s)
    assert one == pytest.approx(s)
    assert probability == pytest.approx(math.exp(-1) / 8 / 2)


def test_balanced_clicks_without_a_vacuum_part_never_happen():
    assert coherent.loading_probability(1, 3, 3, 0, 1) == (0.0, (0j, 0j))


def test_total_loading_probability():
    s = 1 / math.sqrt(2)
    expected = 2 * math.exp(-1) * coherent.bessel_i(1, 1.0)
    for upsilon, xi in ((1, 0), (s, s)):
        total = coherent.total_loading_probability(1, upsilon, xi, 20)
        assert total == pytest.approx(expected, rel=1e-10)


def test_loading_distribution_sums_to_one():
    outcomes = list(coherent.loading_distribution(1, 1, 0, 20))
    assert len(outcomes) == 21 * 21
    assert (outcomes[0].i, outcomes[0].j) == (0, 0)
    assert sum(o.probability for o in outcomes) == pytest.approx(1, abs=1e-10)


def test_loading_arguments():
    with pytest.raises(InvalidAmplitude):
        coherent.loading_probability(0, 1, 0, 1, 0)
    with pytest.raises(InvalidAmplitude):
        coherent.loading_probability(1, 1, 0, 1, 1)
    with pytest.raises(InvalidAmplitude):
        coherent.loading_probability(1, 1, 0, 0, 0)
    with pytest.raises(ValueError):
        coherent.loading_probability(1, -1, 0, 1, 0)


def test_config_defaults():
    config = CoherentConfig(1.0)
    assert config.n == 2
    assert config.cutoff == coherent.default_cutoff(1.0) == 21
    assert config.method == "closed_form"


def test_config_validation():
    with pytest.raises(NotDiscriminating):
        CoherentConfig(0)
    with pytest.raises(InvalidModeCount):
        CoherentConfig(1, n=1)
    with pytest.raises(InvalidAmplitude):
        CoherentConfig(1, upsilon=1, xi=1)
    with pytest.raises(ValueError):
        CoherentConfig(1, method="bogus")


def test_record_emits_result(ee):
    seen = []
    ee.add_listener("coherent.result", seen.append)
    record = coherent.coherent_record(CoherentConfig(Fraction(1, 3), n=4))
    assert seen == [record]
    assert record["n"] == 4
    assert record["p_plus"] == pytest.approx(0.358285, abs=1e-6)
    assert record["average"] == pytest.approx(
        (record["p_plus"] + record["p_minus"]) / 2
    )
    assert "loading_total" not in record


def test_record_with_loading():
    s = 1 / math.sqrt(2)
    record = coherent.coherent_record(CoherentConfig(1, upsilon=s, xi=s))
    assert record["p_plus"] == record["p_minus"]
    assert record["loading_total"] == pytest.approx(record["p_plus"], rel=1e-10)


def test_series_edge_cases():
    assert coherent.bs_coherent_series(1, 0) == 0
    assert coherent.bs_coherent_series(1, 1) == pytest.approx(math.exp(-1))


def test_beam_splitter_success_decreases_with_alpha():
    values = [coherent.bs_coherent_success(alpha) for alpha in (1, 2, 3, 4)]
    assert values == sorted(values, reverse=True)
    assert len(set(values)) == 4


def test_balanced_clicks_load_the_vacuum_part():
    s = 1 / math.sqrt(2)
    _, (zero, one) = coherent.loading_probability(2, 3, 3, s, s)
    assert zero == pytest.approx(1)
    assert one == 0


def test_swapped_clicks_flip_the_loaded_phase():
    s = 1 / math.sqrt(2)
    p_ij, (zero_ij, one_ij) = coherent.loading_probability(1, 2, 1, s, s)
    p_ji, (zero_ji, one_ji) = coherent.loading_probability(1, 1, 2, s, s)
    assert p_ij == pytest.approx(p_ji)
    assert zero_ij == pytest.approx(zero_ji)
    assert one_ij == pytest.approx(-one_ji)


def test_total_loading_converges_in_cutoff():
    s = 1 / math.sqrt(2)
    at_40 = coherent.total_loading_probability(1, s, s, 40)
    at_50 = coherent.total_loading_probability(1, s, s, 50)
    assert at_40 == pytest.approx(at_50, abs=1e-12)
