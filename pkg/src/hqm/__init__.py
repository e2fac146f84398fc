"""Quantum bound states in a helically twisted space.

The geometry couples the azimuthal and longitudinal motion and produces an
attractive 1/r term in the radial equation.  This package provides the
closed-form Coulomb-like spectrum and wavefunctions, a finite-difference
eigensolver that cross-checks them, and the twisted harmonic-oscillator model
(solved numerically only).
"""

from hqm.constants import CONSTANTS, EV, ELECTRON_MASS, HBAR, unit_energy
from hqm.errors import (
    AssemblyError,
    ConvergenceError,
    DomainError,
    NoBoundStateError,
    UnderResolvedGridError,
)
from hqm.potentials import ModelParams, OscillatorParams

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS",
    "EV",
    "ELECTRON_MASS",
    "HBAR",
    "unit_energy",
    "AssemblyError",
    "ConvergenceError",
    "DomainError",
    "NoBoundStateError",
    "UnderResolvedGridError",
    "ModelParams",
    "OscillatorParams",
]
