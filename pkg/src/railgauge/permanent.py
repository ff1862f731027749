"""Matrix permanents and the permanent-based transfer amplitude.

The amplitude oracle is independent of the polynomial expansion in
:mod:`railgauge.fock`; the two are cross-checked in the test suite and in
``railgauge verify``.
"""

from __future__ import annotations

from itertools import combinations
import math
from typing import Sequence

import numpy as np

from .exceptions import DimensionMismatch
from .fock import AncillaSpec
from .unitaries import Interferometer

MAX_PERMANENT_DIM = 20


def permanent(matrix) -> complex:
    """Permanent of a square matrix by Ryser's formula.

    The subsets are walked in Gray-code order so each step adds or removes
    a single column from the running row sums. The empty matrix has
    permanent 1.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"permanent needs a square matrix, got shape {a.shape}")
    m = a.shape[0]
    if m == 0:
        return 1 + 0j
    if m > MAX_PERMANENT_DIM:
        raise DimensionMismatch(f"permanent dimension {m} exceeds {MAX_PERMANENT_DIM}")

    rowsums = np.zeros(m, dtype=np.complex128)
    included = np.zeros(m, dtype=bool)
    total = 0j
    previous = 0
    for step in range(1, 2**m):
        gray = step ^ (step >> 1)
        column = (gray ^ previous).bit_length() - 1
        previous = gray
        if included[column]:
            rowsums -= a[:, column]
        else:
            rowsums += a[:, column]
        included[column] = not included[column]
        # (-1)^(m - |S|)
        sign = -1 if (m - bin(gray).count("1")) % 2 else 1
        total += sign * np.prod(rowsums)
    return complex(total)


def transfer_matrix(
    U: Interferometer, inputs: Sequence[int], pattern: Sequence[int]
) -> np.ndarray:
    """Rows are the 1-based input modes, columns repeat output mode k i_k times."""
    columns = [k for k, i in enumerate(pattern) for _ in range(i)]
    rows = [j - 1 for j in inputs]
    return U.entries[np.ix_(rows, columns)]


def amplitude_oracle(
    U: Interferometer, spec: AncillaSpec, pattern: Sequence[int]
) -> complex:
    """Fock amplitude of ``pattern`` after sending ``spec`` through ``U``.

    Sums the permanents of every input subset of matching photon number,
    weighted by the subset's signs and phases.
    """
    if spec.n != U.n:
        raise DimensionMismatch(f"spec has {spec.n} modes, unitary has {U.n}")
    if len(pattern) != U.n:
        raise DimensionMismatch(f"pattern has {len(pattern)} modes, unitary has {U.n}")
    total = sum(pattern)
    if total > U.n:
        return 0j

    phase = complex(np.exp(1j * spec.phi))
    amplitude = 0j
    for subset in combinations(range(1, U.n + 1), total):
        weight = phase**total * math.prod(spec.signs[j - 1] for j in subset)
        amplitude += weight * permanent(transfer_matrix(U, subset, pattern))
    normalisation = math.sqrt(math.prod(math.factorial(i) for i in pattern))
    return amplitude / normalisation / math.sqrt(2**U.n)
