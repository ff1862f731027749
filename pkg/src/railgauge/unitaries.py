"""Interferometer unitaries.

An :class:`Interferometer` maps input creation operators to output ones,
``a_j -> sum_k U[j, k] b_k`` with 1-based mode labels on every external
surface. Green Machines and the 12-mode Hadamard unitary additionally carry
their integer numerators ``N`` and norm ``D`` with ``U = N / sqrt(D)``,
which is what the exact backend of :mod:`railgauge.fock` runs on.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field
import enum
import math
from typing import Iterable
from typing import Optional
from typing import Sequence
import warnings

import numpy as np

from .exceptions import InvalidModeCount
from .exceptions import InvalidPort
from .exceptions import NotPowerOfTwo
from .validation import is_power_of_two
from .validation import mode_count_validator
from .validation import validate_arguments

UNITARITY_TOL = 1e-12


class InterferometerKind(enum.Enum):
    QFT = "qft"
    GREEN_MACHINE = "gm"
    HADAMARD12 = "hadamard12"
    CUSTOM = "custom"


@dataclass(frozen=True)
class BeamSplitter:
    """Balanced real beam splitter between two ports.

    ``a -> (b_a + b_b)/sqrt(2)`` and ``b -> (b_a - b_b)/sqrt(2)``. The block
    has no imaginary unit; the recursive Green Machine relies on that.
    """

    port_a: int
    port_b: int
    layer: int = 1

    def __post_init__(self):
        if self.port_a == self.port_b:
            raise InvalidPort("a beam splitter needs two distinct ports")
        if self.port_a < 1 or self.port_b < 1:
            raise InvalidPort("ports are 1-based")

    def as_dict(self) -> dict[str, int]:
        return {"layer": self.layer, "port_a": self.port_a, "port_b": self.port_b}


@dataclass(frozen=True, eq=False)
class Interferometer:
    n: int
    entries: np.ndarray
    kind: InterferometerKind = InterferometerKind.CUSTOM
    mesh: Optional[tuple[BeamSplitter, ...]] = None
    numerators: Optional[tuple[tuple[int, ...], ...]] = field(default=None, repr=False)
    norm: Optional[int] = None

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.shape != (self.n, self.n):
            raise InvalidModeCount(
                f"expected a {self.n}x{self.n} matrix, got shape {entries.shape}"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def is_exact(self) -> bool:
        return self.numerators is not None and self.norm is not None

    def entry(self, j: int, k: int) -> complex:
        """Entry ``U_{jk}`` with 1-based indices."""
        return complex(self.entries[j - 1, k - 1])

    def unitarity_error(self) -> float:
        gram = self.entries @ self.entries.conj().T
        return float(np.max(np.abs(gram - np.eye(self.n))))

    def is_unitary(self, tol: float = UNITARITY_TOL) -> bool:
        return self.unitarity_error() <= tol

    def is_exactly_unitary(self) -> bool:
        """Check ``N N^T == D I`` in integer arithmetic."""
        if not self.is_exact:
            return False
        rows = self.numerators
        assert rows is not None
        for j, row_j in enumerate(rows):
            for k, row_k in enumerate(rows):
                dot = sum(x * y for x, y in zip(row_j, row_k))
                if dot != (self.norm if j == k else 0):
                    return False
        return True

    def as_dict(self) -> dict:
        data: dict = {
            "n": self.n,
            "kind": self.kind.value,
            "entries_re": self.entries.real.tolist(),
            "entries_im": self.entries.imag.tolist(),
        }
        if self.mesh is not None:
            data["mesh"] = [bs.as_dict() for bs in self.mesh]
        return data

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interferometer):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.n, self.entries.tobytes()))


def _from_numerators(
    rows: Sequence[Sequence[int]],
    norm: int,
    kind: InterferometerKind,
    mesh: Optional[tuple[BeamSplitter, ...]] = None,
) -> Interferometer:
    numerators = tuple(tuple(int(x) for x in row) for row in rows)
    entries = np.array(numerators, dtype=np.float64) / math.sqrt(norm)
    return Interferometer(len(numerators), entries, kind, mesh, numerators, norm)


def _sylvester(n: int) -> list[list[int]]:
    h = [[1]]
    while len(h) < n:
        h = [row + row for row in h] + [row + [-x for x in row] for row in h]
    return h


@validate_arguments(mode_count_validator)
def build_qft(n: int) -> Interferometer:
    """Quantum Fourier Transform, ``U_{jk} = w^((j-1)(k-1)) / sqrt(n)``.

    ``w = exp(2 pi i / n)``; exponents are reduced modulo n before taking
    the exponential.
    """
    if n < 2:
        raise InvalidModeCount(f"a QFT needs at least 2 modes, got {n}")
    idx = np.arange(n)
    exponents = np.outer(idx, idx) % n
    entries = np.exp(2j * np.pi * exponents / n) / math.sqrt(n)
    return Interferometer(n, entries, InterferometerKind.QFT)


@validate_arguments(mode_count_validator)
def build_green_machine(n: int) -> Interferometer:
    """Power-of-2 Hadamard unitary from the Sylvester recursion.

    ``U_n = [[U_{n/2}, U_{n/2}], [U_{n/2}, -U_{n/2}]] / sqrt(2)``.
    """
    if n < 2 or not is_power_of_two(n):
        raise NotPowerOfTwo(f"a Green Machine needs a power of 2 modes, got {n}")
    return _from_numerators(_sylvester(n), n, InterferometerKind.GREEN_MACHINE)


@validate_arguments(mode_count_validator)
def build_gm_mesh(n: int) -> tuple[BeamSplitter, ...]:
    """Beam splitter mesh realising :func:`build_green_machine`.

    Layer ``l`` pairs port ``j`` with ``j + 2**(l-1)`` inside blocks of size
    ``2**l``. The mesh has ``(n/2) log2(n)`` splitters.
    """
    if n < 2 or not is_power_of_two(n):
        raise NotPowerOfTwo(f"a Green Machine needs a power of 2 modes, got {n}")
    mesh = []
    for layer in range(1, n.bit_length()):
        half = 1 << (layer - 1)
        for block_start in range(0, n, 2 * half):
            for j in range(half):
                port = block_start + j + 1
                mesh.append(BeamSplitter(port, port + half, layer))
    return tuple(mesh)


HADAMARD12_SIGNS = (
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    (1, -1, 1, -1, 1, 1, 1, -1, -1, -1, 1, -1),
    (1, -1, -1, 1, -1, 1, 1, 1, -1, -1, -1, 1),
    (1, 1, -1, -1, 1, -1, 1, 1, 1, -1, -1, -1),
    (1, -1, 1, -1, -1, 1, -1, 1, 1, 1, -1, -1),
    (1, -1, -1, 1, -1, -1, 1, -1, 1, 1, 1, -1),
    (1, -1, -1, -1, 1, -1, -1, 1, -1, 1, 1, 1),
    (1, 1, -1, -1, -1, 1, -1, -1, 1, -1, 1, 1),
    (1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1, 1),
    (1, 1, 1, 1, -1, -1, -1, 1, -1, -1, 1, -1),
    (1, -1, 1, 1, 1, -1, -1, -1, 1, -1, -1, 1),
    (1, 1, -1, 1, 1, 1, -1, -1, -1, 1, -1, -1),
)


def build_hadamard12() -> Interferometer:
    """The fixed 12-mode Hadamard unitary (not symmetric)."""
    return _from_numerators(HADAMARD12_SIGNS, 12, InterferometerKind.HADAMARD12)


def apply_mesh(mesh: Iterable[BeamSplitter], n: int) -> Interferometer:
    """Compose a beam splitter mesh into a dense unitary.

    Splitters act in order, each one multiplying onto the right of the
    accumulated row-convention matrix. When every port sits in the same
    number ``k`` of splitters the result is also kept exactly as integer
    numerators over ``sqrt(2**k)``.
    """
    mode_count_validator(n)
    mesh = tuple(mesh)
    for bs in mesh:
        if not (1 <= bs.port_a <= n and 1 <= bs.port_b <= n):
            raise InvalidPort(
                f"splitter ({bs.port_a}, {bs.port_b}) outside ports 1..{n}"
            )

    numerators = [[int(j == k) for k in range(n)] for j in range(n)]
    depth = [0] * n
    for bs in mesh:
        a, b = bs.port_a - 1, bs.port_b - 1
        for row in numerators:
            row[a], row[b] = row[a] + row[b], row[a] - row[b]
        depth[a] += 1
        depth[b] += 1

    if len(set(depth)) <= 1:
        return _from_numerators(
            numerators, 2 ** (depth[0] if depth else 0), InterferometerKind.CUSTOM, mesh
        )

    warnings.warn("uneven mesh depth, composing the mesh in floating point")
    u = np.eye(n, dtype=np.complex128)
    r = 1 / math.sqrt(2)
    for bs in mesh:
        a, b = bs.port_a - 1, bs.port_b - 1
        col_a, col_b = u[:, a].copy(), u[:, b].copy()
        u[:, a] = r * (col_a + col_b)
        u[:, b] = r * (col_a - col_b)
    return Interferometer(n, u, InterferometerKind.CUSTOM, mesh)


def build(kind: InterferometerKind | str, n: int) -> Interferometer:
    """Build an interferometer by kind name (``qft``, ``gm``, ``hadamard12``)."""
    kind = InterferometerKind(kind)
    if kind is InterferometerKind.QFT:
        return build_qft(n)
    if kind is InterferometerKind.GREEN_MACHINE:
        return build_green_machine(n)
    if kind is InterferometerKind.HADAMARD12:
        if n != 12:
            raise InvalidModeCount(f"the Hadamard12 unitary has 12 modes, not {n}")
        return build_hadamard12()
    raise ValueError("custom interferometers have no builder")
