"""Click-pattern classification and success/failure rates.

For each photon-number sector ``I`` every click pattern is classified by
comparing its probability under the two signal hypotheses ``|+>`` and
``|->``: a pattern that only one hypothesis can produce identifies the
input, a pattern both can produce is a failure. Sectors ``I = 0`` and
``I = n`` never discriminate and are assigned wholly to failure.

Example::

    from railgauge.unitaries import build_green_machine
    from railgauge.measurement import run_measurement

    report = run_measurement(build_green_machine(8))
    report.overall  # Fraction(147, 256)
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import enum
from fractions import Fraction
import math
from typing import Iterable
from typing import Optional
from typing import Sequence
from typing import Union
import warnings

from . import progress
from .config import max_workers as default_max_workers
from .exceptions import InvalidSigns
from .exceptions import RailgaugeError
from .fock import AncillaSpec
from .fock import Backend
from .fock import ClickPattern
from .fock import FactorialProducts
from .fock import Probability
from .fock import SignalSplit
from .fock import parse_signs
from .fock import pattern_keys
from .fock import qubit_factor
from .fock import split_signal
from .unitaries import Interferometer
from .unitaries import InterferometerKind
from .unitaries import build
from .unitaries import build_hadamard12
from .validation import probability_pair_validator
from .validation import validate_arguments

FLOAT_TOL = 1e-9
UNREACHABLE_MASS_LIMIT = 1e-8


class Verdict(enum.Enum):
    SUCCESS_PLUS = "success_plus"
    SUCCESS_MINUS = "success_minus"
    FAILURE = "failure"
    UNREACHABLE = "unreachable"


@validate_arguments(probability_pair_validator)
def classify(
    p_plus: Probability, p_minus: Probability, tol: Probability = 0
) -> Verdict:
    """Verdict for one click pattern.

    A probability counts as nonzero when it exceeds ``tol``. Use ``0`` with
    exact probabilities and :data:`FLOAT_TOL` with floating point ones.
    """
    return _verdict(p_plus, p_minus, tol)


def _verdict(p_plus, p_minus, tol) -> Verdict:
    plus = p_plus > tol
    minus = p_minus > tol
    if plus and minus:
        return Verdict.FAILURE
    if plus:
        return Verdict.SUCCESS_PLUS
    if minus:
        return Verdict.SUCCESS_MINUS
    return Verdict.UNREACHABLE


@dataclass(frozen=True)
class PatternVerdict:
    pattern: ClickPattern
    p_plus: Probability
    p_minus: Probability
    verdict: Verdict


@dataclass(frozen=True)
class SectorRates:
    """Rates of one photon-number sector ``I`` (``s_{n,I±}``, ``f_{n,I±}``)."""

    photons: int
    probability: Probability
    s_plus: Probability
    s_minus: Probability
    f_plus: Probability
    f_minus: Probability


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class MeasurementReport:
    n: int
    kind: InterferometerKind
    phi: float
    signs: str
    backend: Backend
    sectors: tuple[SectorRates, ...]
    s_plus: Probability
    s_minus: Probability
    f_plus: Probability
    f_minus: Probability
    checks: tuple[CheckResult, ...] = ()
    prior_plus: Probability = Fraction(1, 2)
    unreachable_mass: Probability = 0
    patterns: Optional[tuple[PatternVerdict, ...]] = None

    @property
    def overall(self) -> Probability:
        """Success probability weighted by the hypothesis priors."""
        return self.prior_plus * self.s_plus + (1 - self.prior_plus) * self.s_minus

    @property
    def exact(self) -> bool:
        return self.backend is Backend.EXACT

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def sector(self, photons: int) -> SectorRates:
        return self.sectors[photons]

    @property
    def sector_success_plus(self) -> dict[int, Probability]:
        return {s.photons: s.s_plus for s in self.sectors}

    @property
    def sector_success_minus(self) -> dict[int, Probability]:
        return {s.photons: s.s_minus for s in self.sectors}

    @property
    def sector_failure_plus(self) -> dict[int, Probability]:
        return {s.photons: s.f_plus for s in self.sectors}

    @property
    def sector_failure_minus(self) -> dict[int, Probability]:
        return {s.photons: s.f_minus for s in self.sectors}


@dataclass
class _SectorTally:
    """Unscaled sums of one sector; probabilities are ``value * scale``."""

    photons: int
    scale: Probability
    s_plus: Probability = 0
    s_minus: Probability = 0
    f_plus: Probability = 0
    f_minus: Probability = 0
    unreachable: Probability = 0
    patterns: Optional[list[PatternVerdict]] = None


def _tally_sector(
    split: SignalSplit,
    photons: int,
    tol: Probability,
    keep_patterns: bool,
) -> _SectorTally:
    n = split.n
    exact = split.backend is Backend.EXACT
    scale = split.scale(photons)
    if tol == 0:
        threshold: Probability = 0
    else:
        threshold = Fraction(tol) / scale if exact else tol / scale
    rest, shifted = split.sector(photons)
    factorials = FactorialProducts(n, split.rest.radix)
    tally = _SectorTally(photons, scale, patterns=[] if keep_patterns else None)

    for pattern, key in pattern_keys(n, n, split.rest.strides, exact_total=photons):
        q = rest.get(key, 0)
        t = shifted.get(key, 0)
        if q == 0 and t == 0:
            continue
        weight = factorials(key)
        if exact:
            w_plus = (q + t) * (q + t) * weight
            w_minus = (q - t) * (q - t) * weight
        else:
            w_plus = abs(q + t) ** 2 * weight
            w_minus = abs(q - t) ** 2 * weight
        verdict = _verdict(w_plus, w_minus, threshold)
        if verdict is Verdict.FAILURE:
            tally.f_plus += w_plus
            tally.f_minus += w_minus
        elif verdict is Verdict.SUCCESS_PLUS:
            tally.s_plus += w_plus
            tally.f_minus += w_minus
        elif verdict is Verdict.SUCCESS_MINUS:
            tally.s_minus += w_minus
            tally.f_plus += w_plus
        else:
            tally.unreachable += (
                Fraction(w_plus + w_minus, 2) if exact else (w_plus + w_minus) / 2
            )
        if tally.patterns is not None:
            tally.patterns.append(
                PatternVerdict(
                    ClickPattern(pattern), w_plus * scale, w_minus * scale, verdict
                )
            )
    return tally


def sector_probability_of(n: int, photons: int) -> Fraction:
    """Probability that ``photons`` of the ``n`` input qubits carry a photon."""
    return Fraction(math.comb(n, photons), 2**n)


def _rates(tally: _SectorTally, n: int, exact: bool) -> SectorRates:
    def value(x: Probability) -> Probability:
        return x * tally.scale if exact else float(x * tally.scale)

    probability = sector_probability_of(n, tally.photons)
    if tally.photons in (0, n):
        zero: Probability = Fraction(0) if exact else 0.0
        total = probability if exact else float(probability)
        return SectorRates(tally.photons, total, zero, zero, total, total)
    return SectorRates(
        tally.photons,
        probability if exact else float(probability),
        value(tally.s_plus),
        value(tally.s_minus),
        value(tally.f_plus),
        value(tally.f_minus),
    )


def _close(a: Probability, b: Probability, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(a - b) <= FLOAT_TOL


def consistency_checks(
    n: int,
    sectors: Sequence[SectorRates],
    totals: tuple[Probability, Probability, Probability, Probability],
    unreachable_mass: Probability,
    exact: bool,
) -> tuple[CheckResult, ...]:
    s_plus, s_minus, f_plus, f_minus = totals
    bad_sectors = [
        s.photons
        for s in sectors
        if not (
            _close(s.s_plus + s.f_plus, s.probability, exact)
            and _close(s.s_minus + s.f_minus, s.probability, exact)
        )
    ]
    endpoints = [sectors[0], sectors[-1]]
    return (
        CheckResult(
            "sector_identity",
            not bad_sectors,
            f"sectors off C(n,I)/2^n: {bad_sectors}" if bad_sectors else "",
        ),
        CheckResult(
            "totals",
            _close(s_plus + f_plus, 1, exact) and _close(s_minus + f_minus, 1, exact),
            f"s+ + f+ = {float(s_plus + f_plus):.15g}, "
            f"s- + f- = {float(s_minus + f_minus):.15g}",
        ),
        CheckResult(
            "endpoint_sectors",
            all(s.s_plus == 0 and s.s_minus == 0 for s in endpoints),
        ),
        CheckResult(
            "unreachable_mass",
            unreachable_mass < UNREACHABLE_MASS_LIMIT,
            f"{float(unreachable_mass):.3g}",
        ),
    )


def _resolve_signs(n: int, ancilla_signs) -> tuple[int, ...]:
    if ancilla_signs is None:
        return (1,) * (n - 1)
    signs = parse_signs(ancilla_signs)
    if len(signs) != n - 1:
        raise InvalidSigns(f"{n} modes need {n - 1} ancilla signs, got {len(signs)}")
    return signs


def run_measurement(
    U: Interferometer,
    phi: float = 0.0,
    ancilla_signs: Union[str, Iterable[Union[int, str]], None] = None,
    *,
    backend: Optional[Backend] = None,
    tol: Optional[Probability] = None,
    prior_plus: Probability = Fraction(1, 2),
    keep_patterns: bool = False,
    max_workers: Optional[int] = None,
) -> MeasurementReport:
    """Classify every click pattern of ``U`` and aggregate the rates.

    Args:
        U: the interferometer; mode 1 carries the signal qubit.
        phi: common azimuth of all inputs, in ``[0, 2 pi)``.
        ancilla_signs: signs of modes 2..n, all ``+`` by default.
        backend: ``None`` picks the exact backend whenever ``U`` has integer
            numerators and ``phi == 0``; an exact request that cannot be
            honoured falls back to float.
        tol: classification tolerance, 0 (exact) or :data:`FLOAT_TOL`.
        prior_plus: prior of the ``|+>`` hypothesis used by ``overall``.
        keep_patterns: keep every reachable pattern's verdict in the report.
        max_workers: threads used across photon-number sectors.

    Returns:
        The immutable :class:`MeasurementReport`.
    """
    n = U.n
    signs = _resolve_signs(n, ancilla_signs)
    # validates phi and the sign vector
    AncillaSpec(n, (1,) + signs, phi)
    if backend is not Backend.FLOAT and phi == 0 and U.is_exact:
        backend = Backend.EXACT
    else:
        backend = Backend.FLOAT
    exact = backend is Backend.EXACT
    if tol is None:
        tol = 0 if exact else FLOAT_TOL

    emitter = progress.get_emitter("railgauge.measurement")
    emitter.emit("measurement.started", n, U.kind, backend)

    factors = [qubit_factor(s, phi, backend) for s in signs]
    norm_sq: Probability = Fraction(1, 2**n) if exact else 0.5**n
    phase = qubit_factor(1, phi, Backend.FLOAT)[1]
    split = split_signal(U, factors, norm_sq, backend, phase, max_degree=n)
    emitter.emit("measurement.evolved", len(split.rest))

    inner = range(1, n) if not keep_patterns else range(0, n + 1)
    workers = max_workers or default_max_workers()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        tallies = {
            t.photons: t
            for t in executor.map(
                lambda photons: _tally_sector(split, photons, tol, keep_patterns), inner
            )
        }
    for photons in (0, n):
        tallies.setdefault(photons, _SectorTally(photons, split.scale(photons)))

    sectors = tuple(_rates(tallies[i], n, exact) for i in range(n + 1))
    zero: Probability = Fraction(0) if exact else 0.0
    s_plus = sum((s.s_plus for s in sectors), zero)
    s_minus = sum((s.s_minus for s in sectors), zero)
    f_plus = sum((s.f_plus for s in sectors), zero)
    f_minus = sum((s.f_minus for s in sectors), zero)
    unreachable_mass = sum(
        (tallies[i].unreachable * tallies[i].scale for i in range(1, n)), zero
    )
    checks = consistency_checks(
        n, sectors, (s_plus, s_minus, f_plus, f_minus), unreachable_mass, exact
    )
    patterns = None
    if keep_patterns:
        patterns = tuple(
            p for i in range(n + 1) for p in (tallies[i].patterns or ())
        )

    report = MeasurementReport(
        n=n,
        kind=U.kind,
        phi=phi,
        signs="".join("+" if s > 0 else "-" for s in signs),
        backend=backend,
        sectors=sectors,
        s_plus=s_plus,
        s_minus=s_minus,
        f_plus=f_plus,
        f_minus=f_minus,
        checks=checks,
        prior_plus=prior_plus,
        unreachable_mass=unreachable_mass,
        patterns=patterns,
    )
    emitter.emit("measurement.finished", report)
    return report


def run_sweep(
    kinds: Iterable[Union[InterferometerKind, str]],
    n_range: Iterable[int],
    phi: float = 0.0,
    *,
    backend: Optional[Backend] = None,
    prior_plus: Probability = Fraction(1, 2),
    max_workers: Optional[int] = None,
) -> list[MeasurementReport]:
    """Reports for every valid ``(kind, n)`` pair, in kind-then-n order.

    Pairs that cannot be built (a Green Machine on a non power of 2, the
    Hadamard12 unitary on anything but 12 modes) are skipped with a warning.
    """
    emitter = progress.get_emitter("railgauge.sweep")
    n_values = list(n_range)
    jobs: list[Interferometer] = []
    for kind in kinds:
        kind = InterferometerKind(kind)
        for n in n_values:
            try:
                jobs.append(build(kind, n))
            except (RailgaugeError, ValueError) as exc:
                warnings.warn(f"skipping {kind.value} n={n}: {exc}")
                emitter.emit("sweep.skipped", kind, n, str(exc))

    def job(U: Interferometer) -> MeasurementReport:
        return run_measurement(
            U, phi, backend=backend, prior_plus=prior_plus, max_workers=1
        )

    workers = max_workers or default_max_workers()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        reports = list(executor.map(job, jobs))
    for report in reports:
        emitter.emit("sweep.report", report)
    return reports


def mixed_ancilla_experiment(
    U: Interferometer,
    phi: float = 0.0,
    signs: Union[str, Iterable[Union[int, str]], None] = None,
    **kwargs,
) -> MeasurementReport:
    """Run the measurement with an arbitrary sign pattern on modes 2..n.

    Flipping every ancilla swaps the roles of ``|+>`` and ``|->``; other
    sign patterns are exploratory.
    """
    return run_measurement(U, phi, signs, **kwargs)


def hadamard12_report(**kwargs) -> MeasurementReport:
    """All-plus measurement with the 12-mode Hadamard unitary at ``phi = 0``."""
    return run_measurement(build_hadamard12(), 0.0, **kwargs)
