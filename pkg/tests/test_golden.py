from pathlib import Path

import pytest

from railgauge.cli import main

DATA = Path(__file__).parent / "data"


def run(capsys, argv):
    assert main(argv) == 0
    return capsys.readouterr().out


@pytest.mark.parametrize(
    ("argv", "golden"),
    [
        (["measure", "--kind", "gm", "--n", "4"], "measure_gm4.json"),
        (["sweep", "--kinds", "gm", "--n", "2..8"], "sweep_gm.csv"),
        (["build-unitary", "--kind", "gm", "--n", "4"], "unitary_gm4.json"),
        (
            ["build-unitary", "--kind", "gm", "--n", "4", "--format", "text"],
            "unitary_gm4.txt",
        ),
    ],
)
def test_output_matches_golden_file(capsys, argv, golden):
    expected = (DATA / golden).read_text(encoding="utf-8")
    assert run(capsys, argv) == expected


def test_golden_file_written_with_output_option(tmp_path, capsys):
    target = tmp_path / "gm4.json"
    assert main(["measure", "--kind", "gm", "--n", "4", "-o", str(target)]) == 0
    assert target.read_bytes() == (DATA / "measure_gm4.json").read_bytes()


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--kinds", "qft,gm", "--n", "2..8"],
        ["sweep", "--kinds", "qft,gm", "--n", "2..8", "--format", "json"],
        ["measure", "--kind", "qft", "--n", "5", "--patterns", "--format", "csv"],
    ],
)
def test_repeated_runs_are_byte_identical(capsys, argv):
    first = run(capsys, argv)
    assert run(capsys, [*argv, "--threads", "1"]) == first
    assert run(capsys, argv) == first


def test_mixed_sweep_keeps_the_golden_green_machine_rows(capsys):
    out = run(capsys, ["sweep", "--kinds", "qft,gm", "--n", "2..8"])
    lines = out.splitlines()
    assert lines[0] == "kind,n,s_plus,s_minus,overall"
    assert [line.split(",")[:2] for line in lines[1:8]] == [
        ["qft", str(n)] for n in range(2, 9)
    ]
    golden = (DATA / "sweep_gm.csv").read_text(encoding="utf-8").splitlines()
    assert lines[8:] == golden[1:]
