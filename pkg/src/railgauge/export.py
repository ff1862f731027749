"""JSON, CSV and text renderings of results.

Exact values are written twice, as a decimal and as a ``"p/q"`` string (bare
integers as ``"0"``) in a ``*_exact`` field, so golden files stay diff-stable.
Output is canonical: sorted keys, sorted patterns, ascending ``n``.
"""

from __future__ import annotations

import csv
from fractions import Fraction
import io
import json
from typing import Any
from typing import Iterable
from typing import Sequence

from .measurement import MeasurementReport
from .measurement import PatternVerdict
from .unitaries import Interferometer


def decimal(value: Any) -> Any:
    if isinstance(value, Fraction):
        return float(format(float(value), ".15g"))
    if isinstance(value, float):
        return float(format(value, ".15g"))
    return value


def exact_string(value: Fraction) -> str:
    return str(value)


def _put(record: dict[str, Any], name: str, value: Any) -> None:
    record[name] = decimal(value)
    if isinstance(value, Fraction):
        record[f"{name}_exact"] = exact_string(value)


def report_as_dict(report: MeasurementReport) -> dict[str, Any]:
    sectors = []
    for s in report.sectors:
        sector: dict[str, Any] = {"I": s.photons}
        _put(sector, "P_sector", s.probability)
        for name in ("s_plus", "s_minus", "f_plus", "f_minus"):
            _put(sector, name, getattr(s, name))
        sectors.append(sector)
    totals: dict[str, Any] = {}
    for name in ("s_plus", "s_minus", "f_plus", "f_minus", "overall"):
        _put(totals, name, getattr(report, name))
    data: dict[str, Any] = {
        "n": report.n,
        "kind": report.kind.value,
        "phi": report.phi,
        "signs": report.signs,
        "backend": report.backend.value,
        "sectors": sectors,
        "totals": totals,
        "checks": [
            {"name": c.name, "pass": c.passed, "detail": c.detail}
            for c in report.checks
        ],
    }
    _put(data, "prior_plus", report.prior_plus)
    if report.patterns is not None:
        data["patterns"] = pattern_rows(report.patterns)
    return data


def pattern_rows(patterns: Iterable[PatternVerdict]) -> list[dict[str, Any]]:
    rows = []
    for p in sorted(patterns, key=lambda p: (p.pattern.total, tuple(p.pattern))):
        row: dict[str, Any] = {
            "pattern": str(p.pattern),
            "total_photons": p.pattern.total,
        }
        _put(row, "P_plus", p.p_plus)
        _put(row, "P_minus", p.p_minus)
        row["verdict"] = p.verdict.value
        rows.append(row)
    return rows


def to_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def _cell(value: Any) -> Any:
    if isinstance(value, Fraction):
        return exact_string(value)
    if isinstance(value, float):
        return format(value, ".15g")
    return value


def sweep_csv(reports: Iterable[MeasurementReport]) -> str:
    """Columns ``kind, n, s_plus, s_minus, overall``."""
    return _csv(
        ("kind", "n", "s_plus", "s_minus", "overall"),
        (
            (r.kind.value, r.n, _cell(r.s_plus), _cell(r.s_minus), _cell(r.overall))
            for r in reports
        ),
    )


def probability_table_csv(patterns: Iterable[PatternVerdict]) -> str:
    """Columns ``pattern, total_photons, P_plus, P_minus``."""
    return _csv(
        ("pattern", "total_photons", "P_plus", "P_minus"),
        (
            (str(p.pattern), p.pattern.total, _cell(p.p_plus), _cell(p.p_minus))
            for p in sorted(patterns, key=lambda p: (p.pattern.total, tuple(p.pattern)))
        ),
    )


def report_csv(report: MeasurementReport) -> str:
    """One row per photon-number sector."""
    return _csv(
        ("I", "P_sector", "s_plus", "s_minus", "f_plus", "f_minus"),
        (
            (
                s.photons,
                _cell(s.probability),
                _cell(s.s_plus),
                _cell(s.s_minus),
                _cell(s.f_plus),
                _cell(s.f_minus),
            )
            for s in report.sectors
        ),
    )


def report_text(report: MeasurementReport) -> str:
    lines = [
        f"{report.kind.value} n={report.n} phi={report.phi:g} "
        f"signs={report.signs or '-'} backend={report.backend.value}",
        f"{'I':>3}  {'s_plus':>22}  {'s_minus':>22}",
    ]
    for s in report.sectors:
        plus, minus = str(_cell(s.s_plus)), str(_cell(s.s_minus))
        lines.append(f"{s.photons:>3}  {plus:>22}  {minus:>22}")
    for name in ("s_plus", "s_minus", "f_plus", "f_minus", "overall"):
        lines.append(f"{name}: {_cell(getattr(report, name))}")
    for check in report.checks:
        result = "PASS" if check.passed else "FAIL"
        lines.append(f"check {check.name}: {result} {check.detail}".rstrip())
    return "\n".join(lines) + "\n"


def unitary_as_dict(U: Interferometer) -> dict[str, Any]:
    data = U.as_dict()
    if U.is_exact:
        data["numerators"] = [list(row) for row in U.numerators or ()]
        data["norm"] = U.norm
    return data


def unitary_csv(U: Interferometer) -> str:
    """Row-major entries as ``row, column, re, im`` with 1-based indices."""
    return _csv(
        ("row", "column", "re", "im"),
        (
            (j + 1, k + 1, format(x.real, ".15g"), format(x.imag, ".15g"))
            for j, row in enumerate(U.entries)
            for k, x in enumerate(row)
        ),
    )


def unitary_text(U: Interferometer) -> str:
    if U.is_exact:
        rows = [" ".join(f"{x:>3d}" for x in row) for row in U.numerators or ()]
        header = f"{U.kind.value} n={U.n}, entries / sqrt({U.norm}):"
        return "\n".join([header, *rows]) + "\n"
    rows = [
        " ".join(f"{x.real:+.6f}{x.imag:+.6f}j" for x in row) for row in U.entries
    ]
    return f"{U.kind.value} n={U.n}:\n" + "\n".join(rows) + "\n"


def coherent_csv(records: Sequence[dict[str, Any]]) -> str:
    header = ("n", "alpha", "cutoff", "p_plus", "p_minus", "average", "method")
    return _csv(header, ((_cell(r[h]) for h in header) for r in records))
