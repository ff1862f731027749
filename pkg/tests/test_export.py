import csv
from fractions import Fraction
import io
import json

import pytest

from railgauge import export
from railgauge.coherent import CoherentConfig
from railgauge.coherent import coherent_record
from railgauge.measurement import run_measurement
from railgauge.measurement import run_sweep
from railgauge.unitaries import build_green_machine
from railgauge.unitaries import build_qft


@pytest.fixture(scope="module")
def gm4_report():
    return run_measurement(build_green_machine(4))


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_decimal_and_exact_strings():
    assert export.decimal(Fraction(1, 3)) == 0.333333333333333
    assert export.decimal(0.1 + 0.2) == 0.3
    assert export.decimal("x") == "x"
    assert export.exact_string(Fraction(147, 256)) == "147/256"


def test_report_as_dict(gm4_report):
    data = export.report_as_dict(gm4_report)
    assert data["n"] == 4
    assert data["kind"] == "gm"
    assert data["backend"] == "exact"
    assert data["signs"] == "+++"
    assert data["totals"]["overall"] == 0.5625
    assert data["totals"]["overall_exact"] == "9/16"
    assert data["totals"]["s_plus_exact"] == "3/8"
    assert data["prior_plus_exact"] == "1/2"
    assert [s["I"] for s in data["sectors"]] == [0, 1, 2, 3, 4]
    assert data["sectors"][2]["P_sector_exact"] == "3/8"
    assert all(check["pass"] for check in data["checks"])
    assert "patterns" not in data


def test_float_report_has_no_exact_fields():
    data = export.report_as_dict(run_measurement(build_qft(3)))
    assert data["backend"] == "float"
    assert "s_minus_exact" not in data["totals"]
    assert data["totals"]["s_minus"] == pytest.approx(2 / 3)


def test_json_is_canonical(gm4_report):
    text = export.to_json(export.report_as_dict(gm4_report))
    assert text.endswith("}\n")
    assert json.loads(text)["totals"]["s_minus_exact"] == "3/4"
    assert text == export.to_json(json.loads(text))


def test_pattern_rows_are_sorted():
    report = run_measurement(build_green_machine(2), keep_patterns=True)
    data = export.report_as_dict(report)
    patterns = data["patterns"]
    assert [p["pattern"] for p in patterns] == ["0 0", "0 1", "1 0", "0 2", "2 0"]
    one_zero = patterns[2]
    assert one_zero["total_photons"] == 1
    assert one_zero["P_plus_exact"] == "1/2"
    assert one_zero["P_minus"] == 0
    assert one_zero["verdict"] == "success_plus"


def test_probability_table_csv():
    report = run_measurement(build_green_machine(2), keep_patterns=True)
    table = rows(export.probability_table_csv(report.patterns))
    assert table[0] == ["pattern", "total_photons", "P_plus", "P_minus"]
    assert table[3] == ["1 0", "1", "1/2", "0"]
    assert table[5] == ["2 0", "2", "1/8", "1/8"]


def test_sweep_csv():
    with pytest.warns(UserWarning):
        reports = run_sweep(["gm"], [2, 3, 4])
    table = rows(export.sweep_csv(reports))
    assert table == [
        ["kind", "n", "s_plus", "s_minus", "overall"],
        ["gm", "2", "1/2", "1/2", "1/2"],
        ["gm", "4", "3/8", "3/4", "9/16"],
    ]


def test_sweep_csv_writes_floats_with_fifteen_digits():
    table = rows(export.sweep_csv([run_measurement(build_qft(3))]))
    kind, n, s_plus, s_minus, overall = table[1]
    assert (kind, n) == ("qft", "3")
    assert float(s_minus) == pytest.approx(2 / 3, abs=1e-14)


def test_report_csv(gm4_report):
    table = rows(export.report_csv(gm4_report))
    assert table[0] == ["I", "P_sector", "s_plus", "s_minus", "f_plus", "f_minus"]
    assert len(table) == 6
    assert table[3][:4] == ["2", "3/8", "3/8", "3/8"]


def test_report_text(gm4_report):
    text = export.report_text(gm4_report)
    assert text.startswith("gm n=4 phi=0 signs=+++ backend=exact\n")
    assert "overall: 9/16\n" in text
    assert "check totals: PASS" in text


def test_unitary_exports():
    U = build_green_machine(2)
    data = export.unitary_as_dict(U)
    assert data["numerators"] == [[1, 1], [1, -1]]
    assert data["norm"] == 2
    assert export.unitary_text(U) == "gm n=2, entries / sqrt(2):\n  1   1\n  1  -1\n"

    table = rows(export.unitary_csv(U))
    assert table[0] == ["row", "column", "re", "im"]
    assert [r[:2] for r in table[1:]] == [
        ["1", "1"],
        ["1", "2"],
        ["2", "1"],
        ["2", "2"],
    ]
    assert float(table[4][2]) == pytest.approx(-(0.5**0.5))


def test_qft_unitary_exports():
    U = build_qft(3)
    assert "numerators" not in export.unitary_as_dict(U)
    lines = export.unitary_text(U).splitlines()
    assert lines[0] == "qft n=3:"
    assert len(lines) == 4


def test_coherent_csv():
    record = coherent_record(CoherentConfig(1))
    table = rows(export.coherent_csv([record]))
    assert table[0] == [
        "n",
        "alpha",
        "cutoff",
        "p_plus",
        "p_minus",
        "average",
        "method",
    ]
    assert table[1][0] == "2"
    assert table[1][-1] == "closed_form"
    assert float(table[1][3]) == pytest.approx(0.4158, abs=1e-4)
