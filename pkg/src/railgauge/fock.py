"""Creation-operator polynomials and their evolution through interferometers.

A multimode state ``sum_i c_i prod_k (b_k^dag)^{i_k} |0>`` is held as a
:class:`FockPolynomial`: one dict per total degree, keyed by the occupancy
vector packed into a single integer (digit ``k`` in base ``radix`` is the
power of mode ``k + 1``). Click-pattern probabilities follow as
``|c|^2 i_1! ... i_n!``.

Two numeric backends exist. ``FLOAT`` stores complex coefficients.
``EXACT`` stores integer numerators for interferometers of the form
``U = N / sqrt(D)`` at ``phi = 0``; a degree-``I`` term then stands for
``numerator * sqrt(norm_sq / D**I)`` and probabilities are exact fractions.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
import enum
from fractions import Fraction
import math
from typing import Dict
from typing import Iterable
from typing import Iterator
from typing import Optional
from typing import Sequence
from typing import Union

from .exceptions import DimensionMismatch
from .exceptions import InvalidSigns
from .unitaries import Interferometer
from .validation import mode_count_validator
from .validation import phi_validator
from .validation import validate_arguments

Coefficient = Union[int, complex]
Probability = Union[Fraction, float]
Layer = Dict[int, Coefficient]
LinearForm = list  # [(stride, coefficient), ...]

NORM_TOL = 1e-9
CLEANUP_RATIO = 1e-14


class Backend(enum.Enum):
    FLOAT = "float"
    EXACT = "exact"


class ClickPattern(tuple):
    """Photon counts per output mode, mode 1 first."""

    def __new__(cls, occupancies: Iterable[int]):
        return super().__new__(cls, (int(i) for i in occupancies))

    @property
    def occupancies(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def total(self) -> int:
        return sum(self)

    def __str__(self) -> str:
        return " ".join(str(i) for i in self)

    def __repr__(self) -> str:
        return f"ClickPattern({tuple(self)!r})"


def _parse_sign(sign: Union[int, str]) -> int:
    if sign in ("+", 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise InvalidSigns(f"signs must be +1/-1 or '+'/'-', got {sign!r}")


def parse_signs(signs: Union[str, Iterable[Union[int, str]]]) -> tuple[int, ...]:
    return tuple(_parse_sign(s) for s in signs)


@dataclass(frozen=True)
class AncillaSpec:
    """Input signs per mode and the common azimuth.

    ``signs[0]`` is the signal qubit's hypothesis sign, the rest are the
    ancillas. Each mode enters as ``(|0> + sign e^{i phi} |1>)/sqrt(2)``.
    """

    n: int
    signs: tuple[int, ...]
    phi: float = 0.0

    def __post_init__(self):
        mode_count_validator(self.n)
        phi_validator(self.phi)
        signs = parse_signs(self.signs)
        if len(signs) != self.n:
            raise InvalidSigns(f"expected {self.n} signs, got {len(signs)}")
        object.__setattr__(self, "signs", signs)

    @classmethod
    def hypothesis(
        cls,
        sign: Union[int, str],
        ancilla_signs: Union[str, Iterable[Union[int, str]]],
        phi: float = 0.0,
    ) -> AncillaSpec:
        ancillas = parse_signs(ancilla_signs)
        return cls(len(ancillas) + 1, (_parse_sign(sign),) + ancillas, phi)

    def flipped(self) -> AncillaSpec:
        return AncillaSpec(self.n, tuple(-s for s in self.signs), self.phi)

    @property
    def signs_str(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)


class FactorialProducts:
    """Cached ``prod_k i_k!`` for packed keys, split into two half-keys."""

    def __init__(self, n: int, radix: int):
        self.n = n
        self.radix = radix
        self.low_digits = n // 2
        self.split = radix**self.low_digits
        self._low: dict[int, int] = {}
        self._high: dict[int, int] = {}

    def _product(self, key: int, digits: int) -> int:
        product = 1
        for _ in range(digits):
            key, i = divmod(key, self.radix)
            if i > 1:
                product *= math.factorial(i)
        return product

    def __call__(self, key: int) -> int:
        high, low = divmod(key, self.split)
        lo = self._low.get(low)
        if lo is None:
            lo = self._low[low] = self._product(low, self.low_digits)
        hi = self._high.get(high)
        if hi is None:
            hi = self._high[high] = self._product(high, self.n - self.low_digits)
        return lo * hi


@dataclass(frozen=True, eq=False)
class FockPolynomial:
    n: int
    layers: tuple[Layer, ...]
    radix: int
    backend: Backend
    norm_sq: Probability
    degree_norm: int = 1
    factors: Optional[tuple[tuple[Coefficient, ...], ...]] = None

    @property
    def max_degree(self) -> int:
        return self.radix - 1

    @property
    def strides(self) -> tuple[int, ...]:
        return tuple(self.radix**k for k in range(self.n))

    def encode(self, pattern: Sequence[int]) -> int:
        if len(pattern) != self.n:
            raise DimensionMismatch(
                f"pattern has {len(pattern)} modes, polynomial has {self.n}"
            )
        key = 0
        for i in reversed(pattern):
            key = key * self.radix + i
        return key

    def decode(self, key: int) -> ClickPattern:
        occupancies = []
        for _ in range(self.n):
            key, i = divmod(key, self.radix)
            occupancies.append(i)
        return ClickPattern(occupancies)

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def _scale(self, degree: int) -> Probability:
        if self.backend is Backend.EXACT:
            return Fraction(self.norm_sq) / self.degree_norm**degree
        return self.norm_sq / self.degree_norm**degree

    def _raw(self, pattern: Sequence[int]) -> tuple[Coefficient, int]:
        degree = sum(pattern)
        if degree > self.max_degree or any(i < 0 for i in pattern):
            return 0, degree
        key = self.encode(pattern)
        if degree >= len(self.layers):
            return 0, degree
        return self.layers[degree].get(key, 0), degree

    def coefficient(self, pattern: Sequence[int]) -> complex:
        """Coefficient of ``prod_k (b_k^dag)^{i_k}`` as a complex number."""
        raw, degree = self._raw(pattern)
        return complex(raw) * math.sqrt(float(self._scale(degree)))

    def amplitude(self, pattern: Sequence[int]) -> complex:
        """Fock amplitude ``<i_1 ... i_n|state>``."""
        weight = math.prod(math.factorial(i) for i in pattern)
        return self.coefficient(pattern) * math.sqrt(weight)

    def probability(self, pattern: Sequence[int]) -> Probability:
        raw, degree = self._raw(pattern)
        weight = math.prod(math.factorial(i) for i in pattern)
        if self.backend is Backend.EXACT:
            return raw * raw * weight * self._scale(degree)
        return abs(raw) ** 2 * weight * self._scale(degree)

    def terms(self) -> Iterator[tuple[ClickPattern, complex]]:
        """Nonzero terms in canonical order (total, then occupancies)."""
        for degree, layer in enumerate(self.layers):
            patterns = sorted(self.decode(key) for key in layer)
            for pattern in patterns:
                yield pattern, self.coefficient(pattern)

    def sector_weights(self, degree: int) -> tuple[dict[int, Probability], Probability]:
        """Unscaled probability weights of one photon-number sector.

        Returns ``({key: weight}, scale)``; the probability of a pattern is
        ``weight * scale``. Exact weights are integers.
        """
        if degree >= len(self.layers):
            return {}, self._scale(degree)
        factorials = FactorialProducts(self.n, self.radix)
        layer = self.layers[degree]
        if self.backend is Backend.EXACT:
            weights = {k: c * c * factorials(k) for k, c in layer.items()}
        else:
            weights = {k: abs(c) ** 2 * factorials(k) for k, c in layer.items()}
        return weights, self._scale(degree)

    def mass(self) -> Probability:
        total: Probability = Fraction(0) if self.backend is Backend.EXACT else 0.0
        for degree in range(len(self.layers)):
            weights, scale = self.sector_weights(degree)
            total += sum(weights.values()) * scale
        return total


def _empty_layers(count: int) -> list[Layer]:
    return [{} for _ in range(count)]


def _times_linear(
    layers: Sequence[Layer], form: LinearForm, max_degree: int
) -> list[Layer]:
    """``L * P`` for a linear form ``L``; terms above ``max_degree`` are pruned."""
    out: list[Layer] = [{}]
    for degree, layer in enumerate(layers):
        if degree + 1 > max_degree:
            break
        out.append(shift_layer(layer, form))
    return out


def shift_layer(layer: Layer, form: LinearForm) -> Layer:
    """Multiply one homogeneous layer by a linear form."""
    target: Layer = {}
    get = target.get
    for key, c in layer.items():
        for stride, h in form:
            k2 = key + stride
            target[k2] = get(k2, 0) + c * h
    return target


def _add_scaled_into(
    target: list[Layer], source: Sequence[Layer], c: Coefficient
) -> None:
    if c == 0:
        return
    while len(target) < len(source):
        target.append({})
    for degree, layer in enumerate(source):
        out = target[degree]
        get = out.get
        if c == 1:
            for key, value in layer.items():
                out[key] = get(key, 0) + value
        else:
            for key, value in layer.items():
                out[key] = get(key, 0) + c * value


def _apply_factor(
    layers: list[Layer],
    coefficients: Sequence[Coefficient],
    form: LinearForm,
    max_degree: int,
) -> list[Layer]:
    """``sum_m coefficients[m] L^m P`` by Horner's scheme."""
    result: list[Layer] = []
    _add_scaled_into(result, layers, coefficients[-1])
    for c in reversed(coefficients[:-1]):
        result = _times_linear(result, form, max_degree)
        _add_scaled_into(result, layers, c)
    return result


def _drop_zeros(
    layers: list[Layer], backend: Backend, n: int, radix: int
) -> list[Layer]:
    """Remove zero terms; float terms whose Fock amplitude is negligible go too."""
    if backend is Backend.EXACT:
        return [{k: c for k, c in layer.items() if c != 0} for layer in layers]
    factorials = FactorialProducts(n, radix)
    amplitudes = [
        {k: abs(c) * math.sqrt(factorials(k)) for k, c in layer.items()}
        for layer in layers
    ]
    largest = max((a for layer in amplitudes for a in layer.values()), default=0.0)
    threshold = CLEANUP_RATIO * largest
    return [
        {k: c for k, c in layer.items() if c != 0 and amps[k] >= threshold}
        for layer, amps in zip(layers, amplitudes)
    ]


def _strides(n: int, radix: int) -> list[int]:
    return [radix**k for k in range(n)]


def _expand(
    factors: Sequence[Sequence[Coefficient]],
    forms: Sequence[LinearForm],
    max_degree: int,
    backend: Backend,
    radix: int,
) -> list[Layer]:
    layers: list[Layer] = [{0: 1}]
    for coefficients, form in zip(factors, forms):
        layers = _apply_factor(layers, coefficients, form, max_degree)
    return _drop_zeros(layers, backend, len(forms), radix)


def product_polynomial(
    factors: Sequence[Sequence[Coefficient]],
    norm_sq: Probability,
    backend: Backend = Backend.FLOAT,
    max_degree: Optional[int] = None,
) -> FockPolynomial:
    """Expand ``prod_j sum_m factors[j][m] (a_j^dag)^m`` over input modes."""
    n = len(factors)
    mode_count_validator(n)
    full_degree = sum(len(f) - 1 for f in factors)
    max_degree = full_degree if max_degree is None else min(max_degree, full_degree)
    radix = max(max_degree, 1) + 1
    factors = tuple(tuple(f) for f in factors)
    if backend is Backend.FLOAT:
        factors = tuple(tuple(complex(c) for c in f) for f in factors)
    forms = [[(stride, 1)] for stride in _strides(n, radix)]
    layers = _expand(factors, forms, max_degree, backend, radix)
    return FockPolynomial(n, tuple(layers), radix, backend, norm_sq, 1, factors)


def _resolve_backend(phi: float, backend: Optional[Backend]) -> Backend:
    if backend is Backend.FLOAT or phi != 0:
        return Backend.FLOAT
    return Backend.EXACT


def qubit_factor(sign: int, phi: float, backend: Backend) -> tuple[Coefficient, ...]:
    if backend is Backend.EXACT:
        return (1, sign)
    return (1 + 0j, sign * cmath.exp(1j * phi))


def input_polynomial(
    spec: AncillaSpec, backend: Optional[Backend] = None
) -> FockPolynomial:
    """``2^{-n/2} prod_j (1 + s_j e^{i phi} a_j^dag)``, fully expanded.

    The exact backend is used unless ``phi != 0`` or float is requested.
    """
    backend = _resolve_backend(spec.phi, backend)
    factors = [qubit_factor(s, spec.phi, backend) for s in spec.signs]
    norm_sq: Probability = Fraction(1, 2**spec.n)
    if backend is Backend.FLOAT:
        norm_sq = 0.5**spec.n
    return product_polynomial(factors, norm_sq, backend)


@validate_arguments(mode_count_validator)
def coherent_polynomial(
    n: int,
    amplitudes: Sequence[complex],
    cutoff: int,
    signal: Optional[tuple[Coefficient, ...]] = None,
) -> FockPolynomial:
    """Product of truncated coherent states, optionally with a signal mode.

    Mode ``j`` carries ``e^{-|a|^2/2} sum_{m <= cutoff} a^m/m! (a_j^dag)^m``.
    When ``signal`` is given it replaces mode 1 and contributes ``1/2`` to
    the normalisation (a balanced qubit).
    """
    factors: list[tuple[Coefficient, ...]] = []
    norm_sq = 1.0
    if signal is not None:
        factors.append(tuple(complex(c) for c in signal))
        norm_sq *= 0.5
    for a in amplitudes:
        factors.append(
            tuple(complex(a) ** m / math.factorial(m) for m in range(cutoff + 1))
        )
        norm_sq *= math.exp(-abs(a) ** 2)
    if len(factors) != n:
        raise DimensionMismatch(f"expected {n} modes, got {len(factors)}")
    return product_polynomial(factors, norm_sq, Backend.FLOAT, max_degree=cutoff)


def linear_form(
    U: Interferometer,
    mode: int,
    radix: int,
    backend: Backend,
    phase: complex = 1,
) -> LinearForm:
    """``phase * sum_k U_{mode,k} b_k^dag`` as (stride, coefficient) pairs."""
    strides = _strides(U.n, radix)
    if backend is Backend.EXACT:
        assert U.numerators is not None
        row = U.numerators[mode - 1]
        return [(s, h) for s, h in zip(strides, row) if h != 0]
    row_c = U.entries[mode - 1]
    return [(s, complex(phase * h)) for s, h in zip(strides, row_c) if h != 0]


def evolve(
    poly: FockPolynomial,
    U: Interferometer,
    max_degree: Optional[int] = None,
) -> FockPolynomial:
    """Substitute ``a_j^dag -> sum_k U_{jk} b_k^dag`` and collect terms.

    Product inputs are multiplied out factor by factor; any other polynomial
    is substituted term by term. Intermediate terms above ``max_degree``
    (default: the input's maximal degree) are pruned.
    """
    if poly.n != U.n:
        raise DimensionMismatch(f"polynomial has {poly.n} modes, unitary has {U.n}")
    max_degree = poly.max_degree if max_degree is None else max_degree
    radix = max(max_degree, 1) + 1
    backend = poly.backend
    if backend is Backend.EXACT and not U.is_exact:
        backend = Backend.FLOAT
    forms = [linear_form(U, j, radix, backend) for j in range(1, U.n + 1)]
    degree_norm = U.norm if backend is Backend.EXACT else 1
    assert degree_norm is not None
    norm_sq: Probability = poly.norm_sq
    if backend is Backend.FLOAT:
        norm_sq = float(poly.norm_sq)

    if poly.factors is not None:
        factors = poly.factors
        if backend is Backend.FLOAT:
            factors = tuple(tuple(complex(c) for c in f) for f in factors)
        layers = _expand(factors, forms, max_degree, backend, radix)
        return FockPolynomial(U.n, tuple(layers), radix, backend, norm_sq, degree_norm)

    # general polynomial: every monomial is a product of powers of the forms
    layers = []
    for degree, layer in enumerate(poly.layers):
        if degree > max_degree:
            break
        scale = 1.0
        if backend is Backend.FLOAT and poly.backend is Backend.EXACT:
            scale = math.sqrt(1 / poly.degree_norm**degree)
        for key, c in layer.items():
            exponents = poly.decode(key)
            monomial: list[Layer] = [{0: c if scale == 1.0 else c * scale}]
            for form, e in zip(forms, exponents):
                for _ in range(e):
                    monomial = _times_linear(monomial, form, max_degree)
            _add_scaled_into(layers, monomial, 1)
    layers = _drop_zeros(layers, backend, U.n, radix)
    if backend is Backend.EXACT:
        degree_norm *= poly.degree_norm
    elif poly.backend is Backend.FLOAT:
        degree_norm = poly.degree_norm
    return FockPolynomial(U.n, tuple(layers), radix, backend, norm_sq, degree_norm)


def pattern_probabilities(poly: FockPolynomial) -> dict[ClickPattern, Probability]:
    """Probability of every click pattern with a nonzero coefficient."""
    probabilities: dict[ClickPattern, Probability] = {}
    for degree in range(len(poly.layers)):
        weights, scale = poly.sector_weights(degree)
        for key in sorted(weights, key=lambda k: poly.decode(k)):
            probabilities[poly.decode(key)] = weights[key] * scale
    return probabilities


def pattern_keys(
    n: int, max_total: int, strides: Sequence[int], exact_total: Optional[int] = None
) -> Iterator[tuple[tuple[int, ...], int]]:
    """Nested loops over occupancies, breaking once a prefix exceeds the cap."""
    pattern = [0] * n
    last = n - 1
    cap = max_total if exact_total is None else min(max_total, exact_total)
    if exact_total is not None and exact_total > max_total:
        return

    def loop(mode: int, prefix: int, key: int) -> Iterator[tuple[tuple[int, ...], int]]:
        stride = strides[mode]
        if mode == last:
            if exact_total is not None:
                pattern[mode] = exact_total - prefix
                yield tuple(pattern), key + pattern[mode] * stride
                return
            for i in range(cap - prefix + 1):
                pattern[mode] = i
                yield tuple(pattern), key + i * stride
            return
        for i in range(cap - prefix + 1):
            pattern[mode] = i
            yield from loop(mode + 1, prefix + i, key + i * stride)

    yield from loop(0, 0, 0)


@validate_arguments(mode_count_validator)
def enumerate_patterns(
    n: int, max_total: int, exact_total: Optional[int] = None
) -> Iterator[ClickPattern]:
    """Every occupancy vector of ``n`` modes with total at most ``max_total``.

    Ordered lexicographically by ``(i_1, ..., i_n)``. ``exact_total``
    restricts the output to a single photon-number sector.
    """
    strides = _strides(n, max_total + 1)
    for pattern, _ in pattern_keys(n, max_total, strides, exact_total):
        yield ClickPattern(pattern)


@dataclass(frozen=True)
class SignalSplit:
    """Output state for both signal hypotheses from one ancilla evolution.

    ``rest`` is the evolved state with the signal mode (mode 1) in vacuum.
    The signal photon contributes ``phase * L_1 * rest``, so the hypothesis
    coefficients of a sector are ``rest + shifted`` and ``rest - shifted``.
    """

    rest: FockPolynomial
    form: LinearForm

    @property
    def n(self) -> int:
        return self.rest.n

    @property
    def backend(self) -> Backend:
        return self.rest.backend

    def sector(self, degree: int) -> tuple[Layer, Layer]:
        layers = self.rest.layers
        rest_layer = layers[degree] if degree < len(layers) else {}
        shifted: Layer = {}
        if 1 <= degree <= len(layers):
            shifted = shift_layer(layers[degree - 1], self.form)
        return rest_layer, shifted

    def scale(self, degree: int) -> Probability:
        return self.rest._scale(degree)

    def hypothesis(self, sign: int) -> FockPolynomial:
        """Materialise the full output polynomial of one hypothesis."""
        layers: list[Layer] = []
        for degree in range(self.rest.max_degree + 1):
            rest_layer, shifted = self.sector(degree)
            layer = dict(rest_layer)
            get = layer.get
            for key, t in shifted.items():
                layer[key] = get(key, 0) + sign * t
            layers.append(layer)
        layers = _drop_zeros(layers, self.backend, self.n, self.rest.radix)
        return FockPolynomial(
            self.n,
            tuple(layers),
            self.rest.radix,
            self.backend,
            self.rest.norm_sq,
            self.rest.degree_norm,
        )


def split_signal(
    U: Interferometer,
    ancilla_factors: Sequence[Sequence[Coefficient]],
    norm_sq: Probability,
    backend: Backend,
    phase: complex = 1,
    max_degree: Optional[int] = None,
) -> SignalSplit:
    """Evolve the ancillas once and keep the signal photon symbolic.

    ``norm_sq`` is the squared normalisation of the whole input, signal
    included. ``max_degree`` defaults to the largest reachable total.
    """
    if len(ancilla_factors) != U.n - 1:
        raise DimensionMismatch(
            f"{U.n} modes need {U.n - 1} ancilla factors, got {len(ancilla_factors)}"
        )
    factors = [(1,)] + [tuple(f) for f in ancilla_factors]
    if max_degree is None:
        max_degree = sum(len(f) - 1 for f in factors) + 1
    rest = evolve(product_polynomial(factors, norm_sq, backend), U, max_degree)
    radix = rest.radix
    return SignalSplit(rest, linear_form(U, 1, radix, rest.backend, phase))
