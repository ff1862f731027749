"""Railgauge: X-basis measurement of single-rail qubits with linear optics.

Simulates boosted measurements in which ``|+>``/``|->`` ancillas and the
signal qubit are mixed on a QFT, Green Machine or Hadamard interferometer and
read out by photon-number-resolving detectors. Success and failure rates are
computed exactly (rational arithmetic) where the interferometer allows it.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .exceptions import ConfigError
from .exceptions import DimensionMismatch
from .exceptions import InvalidAmplitude
from .exceptions import InvalidModeCount
from .exceptions import InvalidPhase
from .exceptions import InvalidPort
from .exceptions import InvalidProbability
from .exceptions import InvalidSigns
from .exceptions import NotDiscriminating
from .exceptions import NotPowerOfTwo
from .exceptions import RailgaugeError
from .fock import AncillaSpec
from .fock import Backend
from .fock import ClickPattern
from .fock import FockPolynomial
from .fock import enumerate_patterns
from .fock import evolve
from .fock import input_polynomial
from .fock import pattern_probabilities
from .measurement import MeasurementReport
from .measurement import Verdict
from .measurement import classify
from .measurement import run_measurement
from .measurement import run_sweep
from .unitaries import BeamSplitter
from .unitaries import Interferometer
from .unitaries import InterferometerKind
from .unitaries import build
from .unitaries import build_gm_mesh
from .unitaries import build_green_machine
from .unitaries import build_hadamard12
from .unitaries import build_qft

__all__ = [
    "AncillaSpec",
    "Backend",
    "BeamSplitter",
    "ClickPattern",
    "ConfigError",
    "DimensionMismatch",
    "FockPolynomial",
    "Interferometer",
    "InterferometerKind",
    "InvalidAmplitude",
    "InvalidModeCount",
    "InvalidPhase",
    "InvalidPort",
    "InvalidProbability",
    "InvalidSigns",
    "MeasurementReport",
    "NotDiscriminating",
    "NotPowerOfTwo",
    "RailgaugeError",
    "Verdict",
    "build",
    "build_gm_mesh",
    "build_green_machine",
    "build_hadamard12",
    "build_qft",
    "classify",
    "enumerate_patterns",
    "evolve",
    "input_polynomial",
    "pattern_probabilities",
    "run_measurement",
    "run_sweep",
]
