from fractions import Fraction
import math

import pytest

from railgauge import verification
from railgauge.verification import CheckOutcome
from railgauge.verification import format_table
from railgauge.verification import run_verification


def test_show():
    assert verification.show(Fraction(3, 8)) == "3/8"
    assert verification.show(2 / 3) == "0.666666666667"
    assert verification.show(0.5j) == "0+0.5j"
    assert verification.show(True) == "True"


@pytest.mark.parametrize(
    "scope", ["unitaries", "measurement", "analytic", "engine", "coherent"]
)
def test_scope_passes(scope):
    outcomes = run_verification(scope, max_workers=2)
    assert outcomes
    assert {o.scope for o in outcomes} == {scope}
    failed = [o for o in outcomes if not o.passed]
    assert not failed, format_table(failed)


def test_check_names_are_unique():
    outcomes = run_verification("analytic")
    names = [o.name for o in outcomes]
    assert len(names) == len(set(names))
    assert "gm8 overall" in names
    assert "gamma n=12 by enumeration" in names
    assert "qft6 sector s_plus" in names


def test_larger_qft_needs_extended():
    reports = verification._Reports(1)
    names = {o.name for o in verification.check_analytic(reports, False)}
    assert "qft8 overall" in names
    assert "qft9 overall" not in names


def test_flipped_ancilla_checks_cover_every_green_machine():
    reports = verification._Reports(2)
    outcomes = {o.name: o for o in verification.check_measurement(reports)}
    for n in (2, 4, 8):
        assert outcomes[f"gm{n} flipped ancillas swap rates"].passed


def test_outcomes_are_emitted(ee):
    seen = []
    ee.add_listener("verify.check", seen.append)
    outcomes = run_verification("unitaries")
    assert seen == outcomes


@pytest.mark.slow
def test_hadamard12_scope():
    outcomes = run_verification("hadamard12")
    assert all(o.passed for o in outcomes)
    assert len(outcomes) == 4 + 2 * 13 + 1


def test_format_table():
    outcomes = [
        CheckOutcome("measurement", "gm4 overall", "9/16", "9/16", True),
        CheckOutcome("measurement", "qft3 s_plus", "0", "0.1", False),
    ]
    lines = format_table(outcomes).splitlines()
    assert lines[0].split() == ["check", "expected", "got", "result"]
    assert lines[1].startswith("gm4 overall")
    assert lines[1].endswith("PASS")
    assert lines[2].endswith("FAIL")
    assert lines[-1] == "1/2 checks passed"


def test_beam_splitter_reference_value():
    exact = 2 * math.exp(-1) * 0.565159103992485
    assert verification.BS_ALPHA_ONE == pytest.approx(exact, abs=1e-6)
    outcomes = {o.name: o for o in verification.check_coherent()}
    assert outcomes["bs alpha=1"].passed
