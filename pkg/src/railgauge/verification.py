"""Self-checks run by ``railgauge verify``.

Each scope compares simulated values against closed forms, golden values
and invariants and yields one :class:`CheckOutcome` per comparison. Every
outcome is also emitted as a ``verify.check`` event on the
``railgauge.verify`` emitter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Any
from typing import Callable
from typing import Iterator
from typing import Optional

from . import analytic
from . import coherent
from . import progress
from .fock import AncillaSpec
from .fock import Backend
from .fock import enumerate_patterns
from .fock import evolve
from .fock import input_polynomial
from .fock import pattern_probabilities
from .measurement import MeasurementReport
from .measurement import mixed_ancilla_experiment
from .measurement import run_measurement
from .permanent import amplitude_oracle
from .unitaries import apply_mesh
from .unitaries import build_gm_mesh
from .unitaries import build_green_machine
from .unitaries import build_hadamard12
from .unitaries import build_qft

FLOAT_TOL = 1e-9
ORACLE_TOL = 1e-10
DEFAULT_MAX_N = 8
ORACLE_MAX_N = 6
EXTENDED_QFT = (9, 10)
# 2 e^-1 I_1(1) = 0.4158208..., not 0.41578
BS_ALPHA_ONE = 0.41582

SCOPE_ORDER = (
    "unitaries",
    "engine",
    "measurement",
    "analytic",
    "hadamard12",
    "coherent",
)


@dataclass(frozen=True)
class CheckOutcome:
    scope: str
    name: str
    expected: str
    got: str
    passed: bool


def show(value: Any) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, complex):
        return f"{value.real:.12g}{value.imag:+.12g}j"
    return str(value)


def _compare(
    scope: str, name: str, expected: Any, got: Any, tol: Optional[float] = None
) -> CheckOutcome:
    if tol is None:
        passed = expected == got
    else:
        passed = abs(expected - got) <= tol
    return CheckOutcome(scope, name, show(expected), show(got), bool(passed))


def _holds(scope: str, name: str, passed: bool, detail: str = "") -> CheckOutcome:
    got = detail or str(bool(passed)).lower()
    return CheckOutcome(scope, name, "true", got, bool(passed))


class _Reports:
    """Measurement reports shared between the scopes of one run."""

    def __init__(self, max_workers: Optional[int]):
        self.max_workers = max_workers
        self._cache: dict[tuple[str, int], MeasurementReport] = {}

    def get(self, kind: str, n: int) -> MeasurementReport:
        if (kind, n) not in self._cache:
            U = {"qft": build_qft, "gm": build_green_machine}[kind](n)
            self._cache[kind, n] = run_measurement(U, max_workers=self.max_workers)
        return self._cache[kind, n]


def _gm_sizes(max_n: int) -> list[int]:
    return [n for n in (2, 4, 8) if n <= max_n]


def check_unitaries() -> Iterator[CheckOutcome]:
    scope = "unitaries"
    for n in range(2, DEFAULT_MAX_N + 1):
        error = build_qft(n).unitarity_error()
        yield _compare(scope, f"qft{n} unitarity error", 0.0, error, 1e-12)
    for n in _gm_sizes(DEFAULT_MAX_N):
        U = build_green_machine(n)
        yield _holds(scope, f"gm{n} exactly unitary", U.is_exactly_unitary())
        mesh = build_gm_mesh(n)
        splitters = n * int(math.log2(n)) // 2
        yield _compare(scope, f"gm{n} mesh splitters", splitters, len(mesh))
        composed = apply_mesh(mesh, n) == U
        yield _holds(scope, f"gm{n} mesh composes to Sylvester", composed)
    exact = build_hadamard12().is_exactly_unitary()
    yield _holds(scope, "hadamard12 exactly unitary", exact)
    yield _compare(scope, "qft4 U[2,2]", 0.5j, build_qft(4).entry(2, 2), 1e-15)


def _hypotheses(n: int, phi: float = 0.0) -> list[AncillaSpec]:
    signs = (1,) * (n - 1)
    return [AncillaSpec(n, (1,) + signs, phi), AncillaSpec(n, (-1,) + signs, phi)]


def check_engine() -> Iterator[CheckOutcome]:
    scope = "engine"
    cases = [("gm", n, build_green_machine(n)) for n in _gm_sizes(ORACLE_MAX_N)]
    cases += [("qft", n, build_qft(n)) for n in range(2, ORACLE_MAX_N + 1)]
    for kind, n, U in cases:
        for spec in _hypotheses(n):
            label = f"{kind}{n} {'+' if spec.signs[0] > 0 else '-'}"
            out = evolve(input_polynomial(spec), U)
            tol = None if out.backend is Backend.EXACT else FLOAT_TOL
            yield _compare(scope, f"{label} normalisation", 1, out.mass(), tol)
            probabilities = pattern_probabilities(out)
            bad = []
            for photons in range(n + 1):
                sector = sum(
                    p for pat, p in probabilities.items() if pat.total == photons
                )
                expected = analytic.sector_probability(n, photons)
                if tol is None and sector != expected:
                    bad.append(photons)
                elif tol is not None and abs(sector - expected) > tol:
                    bad.append(photons)
            detail = f"mismatch at {bad}" if bad else ""
            yield _holds(scope, f"{label} sector masses", not bad, detail)
            worst = max(
                abs(out.amplitude(pattern) - amplitude_oracle(U, spec, pattern))
                for pattern in enumerate_patterns(n, n)
            )
            yield _compare(scope, f"{label} oracle agreement", 0.0, worst, ORACLE_TOL)
    U = build_qft(4)
    reference = pattern_probabilities(evolve(input_polynomial(_hypotheses(4)[1]), U))
    for phi in (math.pi / 4, 1.234):
        rotated = evolve(input_polynomial(_hypotheses(4, phi)[1]), U)
        worst = max(
            abs(rotated.probability(p) - float(reference.get(p, 0)))
            for p in enumerate_patterns(4, 4)
        )
        name = f"qft4 phi={phi:.4g} independence"
        yield _compare(scope, name, 0.0, worst, ORACLE_TOL)


def check_measurement(reports: _Reports) -> Iterator[CheckOutcome]:
    scope = "measurement"
    gm8 = reports.get("gm", 8)
    yield _compare(scope, "gm8 overall", Fraction(147, 256), gm8.overall)
    gm4 = reports.get("gm", 4)
    yield _compare(scope, "gm4 s_plus", Fraction(3, 8), gm4.s_plus)
    yield _compare(scope, "gm4 s_minus", Fraction(3, 4), gm4.s_minus)
    yield _compare(scope, "gm4 overall", Fraction(9, 16), gm4.overall)
    qft3 = reports.get("qft", 3)
    yield _compare(scope, "qft3 s_plus", 0.0, qft3.s_plus, FLOAT_TOL)
    yield _compare(scope, "qft3 s_minus", 2 / 3, qft3.s_minus, FLOAT_TOL)
    for n in range(2, DEFAULT_MAX_N + 1):
        report = reports.get("qft", n)
        yield _holds(scope, f"qft{n} consistency checks", report.passed)
    for n in _gm_sizes(DEFAULT_MAX_N):
        gm, qft = reports.get("gm", n), reports.get("qft", n)
        yield _holds(scope, f"gm{n} consistency checks", gm.passed)
        worst = max(
            abs(float(getattr(a, f)) - float(getattr(b, f)))
            for a, b in zip(gm.sectors, qft.sectors)
            for f in ("s_plus", "s_minus", "f_plus", "f_minus")
        )
        yield _compare(scope, f"gm{n} = qft{n} per sector", 0.0, worst, FLOAT_TOL)
    for n in _gm_sizes(DEFAULT_MAX_N):
        gm = reports.get("gm", n)
        flipped = mixed_ancilla_experiment(build_green_machine(n), 0.0, "-" * (n - 1))
        yield _holds(
            scope,
            f"gm{n} flipped ancillas swap rates",
            (flipped.s_plus, flipped.f_plus, flipped.s_minus, flipped.f_minus)
            == (gm.s_minus, gm.f_minus, gm.s_plus, gm.f_plus),
        )


def check_analytic(reports: _Reports, extended: bool) -> Iterator[CheckOutcome]:
    scope = "analytic"
    for n in range(2, 13):
        bad = [
            i
            for i in range(n + 1)
            if analytic.gamma(n, i) != analytic.gamma_bruteforce(n, i)
        ]
        detail = f"mismatch at {bad}" if bad else ""
        yield _holds(scope, f"gamma n={n} by enumeration", not bad, detail)
        bound = all(
            analytic.sector_minus_from_gamma(n, i)
            == analytic.sector_minus_formula(n, i)
            for i in range(n + 1)
        )
        yield _holds(scope, f"sector_minus n={n} meets the overlap bound", bound)
    for n in range(2, 13, 2):
        yield _compare(
            scope,
            f"sector_minus n={n} I=n/2",
            analytic.sector_probability(n, n // 2),
            analytic.sector_minus_formula(n, n // 2),
        )
    qft_sizes = list(range(2, DEFAULT_MAX_N + 1))
    if extended:
        qft_sizes += EXTENDED_QFT
    runs = [("gm", n) for n in _gm_sizes(DEFAULT_MAX_N)]
    runs += [("qft", n) for n in qft_sizes]
    formulas = (
        ("s_plus", analytic.s_plus_formula),
        ("s_minus", analytic.s_minus_formula),
        ("overall", analytic.overall_formula),
    )
    for kind, n in runs:
        report = reports.get(kind, n)
        for name, formula in formulas:
            expected = formula(n)
            got = getattr(report, name)
            if report.exact:
                yield _compare(scope, f"{kind}{n} {name}", expected, got)
            else:
                yield _compare(
                    scope, f"{kind}{n} {name}", float(expected), got, FLOAT_TOL
                )
        worst = max(
            abs(float(s.s_minus - analytic.sector_minus_formula(n, s.photons)))
            for s in report.sectors
        )
        yield _compare(scope, f"{kind}{n} sector s_minus", 0.0, worst, FLOAT_TOL)
        worst = max(
            abs(float(s.s_plus - analytic.sector_plus_formula(n, s.photons)))
            for s in report.sectors
        )
        yield _compare(scope, f"{kind}{n} sector s_plus", 0.0, worst, FLOAT_TOL)


def check_hadamard12(max_workers: Optional[int]) -> Iterator[CheckOutcome]:
    scope = "hadamard12"
    report = run_measurement(build_hadamard12(), max_workers=max_workers)
    for name, value in analytic.HADAMARD12_TOTALS.items():
        yield _compare(scope, f"hadamard12 {name}", value, getattr(report, name))
    for row in analytic.HADAMARD12_TABLE:
        sector = report.sector(row.photons)
        for name in ("s_plus", "s_minus"):
            yield _compare(
                scope,
                f"hadamard12 {name} I={row.photons}",
                getattr(row, name),
                getattr(sector, name),
            )
    deviates = any(
        s.s_minus != analytic.sector_minus_formula(12, s.photons)
        for s in report.sectors
    )
    yield _holds(scope, "hadamard12 deviates from sector_minus formula", deviates)


def check_coherent() -> Iterator[CheckOutcome]:
    scope = "coherent"
    bs1 = coherent.bs_coherent_success(1)
    i1 = coherent.bessel_i(1, 1.0)
    yield _compare(scope, "I_1(1)", 0.565159103992485, i1, 1e-12)
    yield _compare(scope, "bs alpha=1", BS_ALPHA_ONE, bs1, 5e-5)
    previous = math.inf
    for alpha in (1, 2, 3, 4):
        value = coherent.bs_coherent_success(alpha)
        name = f"bs alpha={alpha} decreasing"
        yield _holds(scope, name, value < previous, show(value))
        previous = value
        if alpha <= 3:
            series = coherent.bs_coherent_success_sim(alpha, 40)
            yield _compare(scope, f"bs alpha={alpha} series", value, series, 1e-10)
    simulated = coherent.bs_coherent_success_sim(1, 40, method="fock_sim")
    yield _compare(scope, "bs alpha=1 fock simulation", bs1, simulated, 1e-10)

    third = Fraction(1, 3)
    p_plus, p_minus = coherent.gm_coherent_success(4, third, 40)
    yield _compare(scope, "gm4 alpha=1/3 p_plus", 0.358, p_plus, 5e-4)
    yield _compare(scope, "gm4 alpha=1/3 p_minus", 0.0037, p_minus, 5e-5)
    average = (p_plus + p_minus) / 2
    yield _compare(scope, "gm4 alpha=1/3 average", 0.1810, average, 5e-5)
    sim_plus, sim_minus = coherent.gm_coherent_success_sim(4, third, 20)
    yield _compare(scope, "gm4 alpha=1/3 p_plus simulated", p_plus, sim_plus, 1e-9)
    yield _compare(scope, "gm4 alpha=1/3 p_minus simulated", p_minus, sim_minus, 1e-9)

    bs_plus, bs_minus = coherent.gm_coherent_success(2, 1, 40)
    yield _compare(scope, "gm2 alpha=1 reduces to beam splitter", bs1, bs_plus, 1e-12)
    yield _compare(scope, "gm2 alpha=1 symmetric", bs_plus, bs_minus, 1e-12)
    r = 1 / math.sqrt(2)
    total = coherent.total_loading_probability(1, r, r, 40)
    yield _compare(scope, "loading total alpha=1", bs1, total, 1e-12)


def run_verification(
    scope: str = "all",
    extended: bool = False,
    max_workers: Optional[int] = None,
) -> list[CheckOutcome]:
    """Run the checks of ``scope`` (or all scopes) and return their outcomes."""
    reports = _Reports(max_workers)
    suites: dict[str, Callable[[], Iterator[CheckOutcome]]] = {
        "unitaries": check_unitaries,
        "engine": check_engine,
        "measurement": lambda: check_measurement(reports),
        "analytic": lambda: check_analytic(reports, extended),
        "hadamard12": lambda: check_hadamard12(max_workers),
        "coherent": check_coherent,
    }
    selected = SCOPE_ORDER if scope == "all" else (scope,)
    emitter = progress.get_emitter("railgauge.verify")
    outcomes = []
    for name in selected:
        for outcome in suites[name]():
            emitter.emit("verify.check", outcome)
            outcomes.append(outcome)
    return outcomes


def format_table(outcomes: list[CheckOutcome]) -> str:
    header = ("check", "expected", "got", "result")
    rows = [
        (o.name, o.expected, o.got, "PASS" if o.passed else "FAIL") for o in outcomes
    ]
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(4)]
    lines = [
        "  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()
        for row in [header, *rows]
    ]
    failed = sum(not o.passed for o in outcomes)
    lines.append(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    return "\n".join(lines) + "\n"
