"""Pinned CODATA-2018 constants and energy-unit helpers.

Everything internal is SI; eV only shows up at the edges.
"""

from __future__ import annotations

from dataclasses import dataclass

from hqm.errors import DomainError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    electron_mass: float = 9.1093837015e-31  # kg
    ev: float = 1.602176634e-19  # J per eV


CONSTANTS = PhysicalConstants()

HBAR = CONSTANTS.hbar
ELECTRON_MASS = CONSTANTS.electron_mass
EV = CONSTANTS.ev


def j_to_ev(energy):
    return energy / EV


def ev_to_j(energy):
    return energy * EV


def kinetic_prefactor(mu: float) -> float:
    """hbar^2 / (2 mu) in J m^2."""
    if not mu > 0:
        raise DomainError(f"mass must be positive, got {mu!r}")
    return HBAR * HBAR / (2.0 * mu)


def unit_energy(k: float, mu: float = ELECTRON_MASS) -> float:
    """Return hbar^2 k^2 / (2 mu) in eV.

    This is the energy scale multiplying every level of the Coulomb-like
    spectrum.

    >>> round(unit_energy(5.0e9), 6)
    0.952496
    """
    return kinetic_prefactor(mu) * k * k / EV
