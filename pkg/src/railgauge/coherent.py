"""Coherent-state ancillas instead of ``|+>`` qubits.

A coherent ancilla of real amplitude ``alpha`` and the signal qubit are mixed
on a balanced beam splitter (``n = 2``) or a Green Machine. Pattern
``(i_1, ..., i_n)`` has conditional amplitude ``1 ± r / alpha`` under the two
hypotheses with ``r = i_1/(n-1) - (i_2 + ... + i_n)``, so a pattern
identifies ``|+>`` when ``r = alpha`` and ``|->`` when ``r = -alpha``.

Closed forms are checked against a truncated Fock simulation that reuses
:mod:`railgauge.fock`.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
from fractions import Fraction
import math
from typing import Iterator
from typing import Optional
from typing import Union
import warnings

from . import progress
from .exceptions import InvalidAmplitude
from .exceptions import InvalidModeCount
from .exceptions import NotDiscriminating
from .fock import Backend
from .fock import FactorialProducts
from .fock import split_signal
from .measurement import Verdict
from .measurement import classify
from .unitaries import build_green_machine
from .validation import alpha_validator
from .validation import mode_count_validator
from .validation import validate_arguments

SERIES_RTOL = 1e-18
NORMALISATION_TOL = 1e-12
COHERENT_TOL = 1e-12
LATTICE_TOL = 1e-9

Real = Union[float, Fraction, int]


def default_cutoff(alpha: Real, n: int = 2) -> int:
    """Per-mode truncation leaving a tail mass well below ``1e-12``."""
    a = abs(float(alpha)) * max(n - 1, 1)
    return math.ceil(a * a + 10 * a + 10)


@dataclass(frozen=True)
class CoherentConfig:
    alpha: Real
    n: int = 2
    cutoff: Optional[int] = None
    upsilon: Optional[complex] = None
    xi: Optional[complex] = None
    method: str = field(default="closed_form")

    def __post_init__(self):
        mode_count_validator(self.n)
        if self.n < 2:
            raise InvalidModeCount(f"coherent ancillas need n >= 2, got {self.n}")
        alpha_validator(self.alpha)
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", default_cutoff(self.alpha, self.n))
        elif self.cutoff < 0:
            raise ValueError(f"cutoff must be non-negative, got {self.cutoff}")
        if self.upsilon is not None or self.xi is not None:
            _check_qubit(self.upsilon or 0, self.xi or 0)
        if self.method not in ("closed_form", "series", "fock_sim"):
            raise ValueError(f"unknown method {self.method!r}")


def _check_qubit(upsilon: complex, xi: complex) -> None:
    norm = abs(upsilon) ** 2 + abs(xi) ** 2
    if norm == 0:
        raise InvalidAmplitude("upsilon and xi cannot both be zero")
    if abs(norm - 1) > NORMALISATION_TOL:
        raise InvalidAmplitude(f"|upsilon|^2 + |xi|^2 must be 1, got {norm}")


def bessel_i(order: int, x: float, *, scaled: bool = False) -> float:
    """Modified Bessel function of the first kind by its ascending series.

    Terms are summed in log space. With ``scaled`` the result is
    ``e^{-x} I_order(x)``, which stays finite for large ``x``.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 1.0 if order == 0 else 0.0
    log_half = math.log(x / 2)
    shift = x if scaled else 0.0
    total = 0.0
    m = 0
    while True:
        log_term = (
            (2 * m + order) * log_half
            - math.lgamma(m + 1)
            - math.lgamma(m + order + 1)
            - shift
        )
        term = math.exp(log_term)
        total += term
        # terms grow until m passes x/2
        if m > x / 2 and term <= SERIES_RTOL * total:
            return total
        m += 1


def _integer_alpha(alpha: Real) -> int:
    alpha_validator(alpha)
    if Fraction(alpha).denominator != 1:
        raise NotDiscriminating(
            f"the beam splitter discriminates only for integer alpha, got {alpha}"
        )
    return int(alpha)


def bs_coherent_success(alpha: Real) -> float:
    """``2 e^{-alpha^2} I_|alpha|(alpha^2)``, the same for both hypotheses."""
    a = abs(_integer_alpha(alpha))
    return 2 * bessel_i(a, float(a * a), scaled=True)


def bs_coherent_series(alpha: Real, cutoff: int) -> float:
    """The beam splitter success rate summed pattern by pattern up to ``cutoff``.

    Pattern ``(i, i - |alpha|)`` contributes
    ``2 e^{-alpha^2} (alpha^2/2)^{2i-|alpha|} / (i! (i-|alpha|)!)``.
    """
    a = abs(_integer_alpha(alpha))
    log_half = math.log(a * a / 2)
    total = 0.0
    for i in range(a, cutoff + 1):
        total += math.exp(
            math.log(2)
            - a * a
            + (2 * i - a) * log_half
            - math.lgamma(i + 1)
            - math.lgamma(i - a + 1)
        )
    return total


def bs_coherent_success_sim(
    alpha: Real, cutoff: Optional[int] = None, method: str = "series"
) -> float:
    """Beam splitter success rate summed as a series or by Fock simulation.

    Args:
        alpha: Integer coherent amplitude.
        cutoff: Largest click count kept; defaults to :func:`default_cutoff`.
        method: ``"series"`` or ``"fock_sim"``.
    """
    cutoff = default_cutoff(alpha) if cutoff is None else cutoff
    if method == "series":
        return bs_coherent_series(alpha, cutoff)
    if method == "fock_sim":
        p_plus, p_minus = gm_coherent_success_sim(2, alpha, cutoff)
        return (p_plus + p_minus) / 2
    raise ValueError(f"unknown method {method!r}")


def _lattice_i1(n: int, m: int, alpha: Real, sign: int) -> Optional[int]:
    x = (n - 1) * (m + sign * alpha)
    i1 = round(x)
    if i1 < 0 or abs(x - i1) > LATTICE_TOL:
        return None
    return i1


@validate_arguments(mode_count_validator, alpha_validator)
def gm_coherent_success(
    n: int, alpha: Real, cutoff: Optional[int] = None
) -> tuple[float, float]:
    """Closed-form ``(p_plus, p_minus)`` for ``n - 1`` coherent ancillas.

    The ancilla modes 2..n are grouped by their total ``m``: the multinomial
    sum over their split is ``(n-1)^m / m!``, and ``i_1`` follows from the
    constraint ``i_1 = (n-1)(m ± alpha)``.
    """
    if n < 2:
        raise InvalidModeCount(f"coherent ancillas need n >= 2, got {n}")
    cutoff = default_cutoff(alpha, n) if cutoff is None else cutoff
    a2 = float(alpha) ** 2
    log_first = math.log((n - 1) ** 2 * a2 / n)
    log_rest = math.log((n - 1) * a2 / n)
    i1_cap = (n - 1) * (cutoff + abs(float(alpha)))
    rates = []
    for sign in (1, -1):
        total = 0.0
        points = 0
        for m in range((n - 1) * cutoff + 1):
            i1 = _lattice_i1(n, m, alpha, sign)
            if i1 is None or i1 > i1_cap:
                continue
            points += 1
            total += math.exp(
                math.log(2)
                - (n - 1) * a2
                + i1 * log_first
                - math.lgamma(i1 + 1)
                + m * log_rest
                - math.lgamma(m + 1)
            )
        if not points:
            warnings.warn(
                f"no click pattern satisfies the {'+' if sign > 0 else '-'} "
                f"constraint for n={n}, alpha={alpha} within cutoff {cutoff}"
            )
        rates.append(total)
    return rates[0], rates[1]


@validate_arguments(mode_count_validator, alpha_validator)
def gm_coherent_success_sim(
    n: int, alpha: Real, cutoff: Optional[int] = None
) -> tuple[float, float]:
    """``(p_plus, p_minus)`` from a truncated Fock evolution.

    The state runs through the Green Machine of size ``n`` and every pattern
    up to ``cutoff`` total photons is classified on its conditional
    probabilities.
    """
    cutoff = default_cutoff(alpha, n) if cutoff is None else cutoff
    U = build_green_machine(n)
    a = float(alpha)
    coefficients = tuple(a**m / math.factorial(m) for m in range(cutoff + 1))
    norm_sq = 0.5 * math.exp(-(n - 1) * a * a)
    split = split_signal(
        U, [coefficients] * (n - 1), norm_sq, Backend.FLOAT, max_degree=cutoff
    )
    factorials = FactorialProducts(n, split.rest.radix)
    p_plus = p_minus = 0.0
    for photons in range(cutoff + 1):
        rest, shifted = split.sector(photons)
        scale = split.scale(photons)
        for key in sorted(rest.keys() | shifted.keys()):
            q = rest.get(key, 0)
            t = shifted.get(key, 0)
            weight = factorials(key) * scale
            w_plus = abs(q + t) ** 2 * weight
            w_minus = abs(q - t) ** 2 * weight
            total = w_plus + w_minus
            if total == 0:
                continue
            verdict = classify(w_plus / total, w_minus / total, COHERENT_TOL)
            if verdict is Verdict.SUCCESS_PLUS:
                p_plus += w_plus
            elif verdict is Verdict.SUCCESS_MINUS:
                p_minus += w_minus
    return p_plus, p_minus


@dataclass(frozen=True)
class LoadingOutcome:
    i: int
    j: int
    probability: float
    state: tuple[complex, complex]


def loading_probability(
    alpha: Real, i: int, j: int, upsilon: complex, xi: complex
) -> tuple[float, tuple[complex, complex]]:
    """Probability of clicks ``(i, j)`` and the memory state they herald.

    The memory ends up in ``alpha upsilon |0> + (i - j) xi |1>``, normalised.
    """
    if alpha == 0:
        raise InvalidAmplitude("loading needs a nonzero coherent amplitude")
    if i < 0 or j < 0:
        raise ValueError("click counts must be non-negative")
    _check_qubit(upsilon, xi)
    a2 = float(alpha) ** 2
    zero = complex(float(alpha) * upsilon)
    one = complex((i - j) * xi)
    weight = abs(zero) ** 2 + abs(one) ** 2
    log_prefactor = -a2 - math.log(a2) + (i + j) * math.log(a2 / 2)
    log_probability = log_prefactor - math.lgamma(i + 1) - math.lgamma(j + 1)
    probability = math.exp(log_probability) * weight
    if weight == 0:
        return 0.0, (0j, 0j)
    norm = math.sqrt(weight)
    return probability, (zero / norm, one / norm)


def loading_distribution(
    alpha: Real, upsilon: complex, xi: complex, cutoff: Optional[int] = None
) -> Iterator[LoadingOutcome]:
    """Every outcome ``(i, j)`` with ``i, j <= cutoff``, row by row."""
    cutoff = default_cutoff(alpha) if cutoff is None else cutoff
    for i in range(cutoff + 1):
        for j in range(cutoff + 1):
            probability, state = loading_probability(alpha, i, j, upsilon, xi)
            yield LoadingOutcome(i, j, probability, state)


def total_loading_probability(
    alpha: Real, upsilon: complex, xi: complex, cutoff: Optional[int] = None
) -> float:
    """Probability of a heralded, correctable load: ``sum_i 2 P(i, i-1)``.

    Outcomes ``(i, i-1)`` and ``(i-1, i)`` load the same state up to a
    known phase flip.
    """
    cutoff = default_cutoff(alpha) if cutoff is None else cutoff
    total = 0.0
    for i in range(1, cutoff + 1):
        total += 2 * loading_probability(alpha, i, i - 1, upsilon, xi)[0]
    return total


def coherent_record(config: CoherentConfig) -> dict:
    """Result record of the ``coherent`` command for one configuration."""
    n, alpha, cutoff = config.n, config.alpha, config.cutoff
    assert cutoff is not None
    if config.method == "closed_form":
        if n == 2:
            p = bs_coherent_success(alpha)
            p_plus, p_minus = p, p
        else:
            p_plus, p_minus = gm_coherent_success(n, alpha, cutoff)
    elif config.method == "series":
        if n == 2:
            p = bs_coherent_series(alpha, cutoff)
            p_plus, p_minus = p, p
        else:
            p_plus, p_minus = gm_coherent_success(n, alpha, cutoff)
    else:
        p_plus, p_minus = gm_coherent_success_sim(n, alpha, cutoff)
    record = {
        "n": n,
        "alpha": float(alpha),
        "cutoff": cutoff,
        "p_plus": p_plus,
        "p_minus": p_minus,
        "average": (p_plus + p_minus) / 2,
        "method": config.method,
    }
    if config.upsilon is not None or config.xi is not None:
        upsilon = complex(config.upsilon or 0)
        xi = complex(config.xi or 0)
        record["loading_total"] = total_loading_probability(alpha, upsilon, xi, cutoff)
    progress.get_emitter("railgauge.coherent").emit("coherent.result", record)
    return record
