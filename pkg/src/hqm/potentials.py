"""Effective radial potentials.

After psi(r) = r^{-1/2} f(r) the radial problem reads
-(hbar^2/2mu) f'' + V(r) f = E f with

    V(r) = (hbar^2/2mu) [ (m^2 - 1/4)/r^2 - 2 omega k m / r + (1 + omega^2) k^2 ]

plus (hbar^2/2mu) Omega^2 r^2 = mu omega0^2 r^2 / 2 for the oscillator.
This expanded form tends to +hbar^2 k^2 (1 + omega^2)/2mu at large r and is
the operator the finite-difference solver diagonalizes.  All energies here
are in joules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hqm.constants import ELECTRON_MASS, HBAR, kinetic_prefactor
from hqm.errors import DomainError, NoBoundStateError


@dataclass(frozen=True)
class ModelParams:
    """Torsion omega, wavenumber k (1/m), azimuthal number m, mass mu (kg)."""

    omega: float
    k: float
    m: int
    mu: float = ELECTRON_MASS

    def __post_init__(self):
        if int(self.m) != self.m:
            raise DomainError(f"m must be an integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        if not (math.isfinite(self.omega) and math.isfinite(self.k)):
            raise DomainError("omega and k must be finite")
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise DomainError(f"mass must be positive, got {self.mu!r}")

    @property
    def coupling(self) -> float:
        """The product omega*k*m; bound states need it positive."""
        return self.omega * self.k * self.m

    @property
    def prefactor(self) -> float:
        return kinetic_prefactor(self.mu)

    def replace(self, **changes) -> "ModelParams":
        fields = dict(omega=self.omega, k=self.k, m=self.m, mu=self.mu)
        fields.update(changes)
        return ModelParams(**fields)


@dataclass(frozen=True)
class OscillatorParams:
    base: ModelParams
    omega0: float
    Omega: float
    iota: float
    xi: float
    Lambda: float | None = None

    @property
    def length(self) -> float:
        """Oscillator length sqrt(hbar / (mu omega0)) in m."""
        return 1.0 / math.sqrt(self.Omega)


def oscillator_parameters(p: ModelParams, omega0: float, energy: float | None = None) -> OscillatorParams:
    """Fill Omega, iota, xi and (when real) Lambda.

    ``energy`` is in J.  Lambda stays ``None`` when no energy is given or
    when 2 mu E / hbar^2 < (1 + omega^2) k^2.
    """
    if p.m == 0:
        raise DomainError("iota = sqrt(m^2 - 1/4) is not real for m = 0")
    if not (math.isfinite(omega0) and omega0 != 0):
        raise DomainError(f"omega0 must be finite and nonzero, got {omega0!r}")
    Omega = abs(p.mu * omega0 / HBAR)
    iota = math.sqrt(p.m * p.m - 0.25)
    xi = p.m * p.omega * p.k
    Lambda = None
    if energy is not None:
        lam2 = energy / p.prefactor - (1.0 + p.omega**2) * p.k**2
        if lam2 >= 0:
            Lambda = math.sqrt(lam2)
    return OscillatorParams(base=p, omega0=float(omega0), Omega=Omega, iota=iota, xi=xi, Lambda=Lambda)


def _radius(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise DomainError("effective potential is defined for r > 0 only")
    return r


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def v_eff_coulomb(r, p: ModelParams):
    r = _radius(r)
    bracket = (p.m * p.m - 0.25) / r**2 - 2.0 * p.coupling / r + (1.0 + p.omega**2) * p.k**2
    return _out(p.prefactor * bracket)


def threshold_energy(p: ModelParams) -> float:
    """Large-r limit of the Coulomb-like potential, in J."""
    return p.prefactor * p.k**2 * (1.0 + p.omega**2)


def potential_minimum(p: ModelParams) -> tuple[float, float]:
    """Location (m) and depth (J) of the attractive well."""
    if p.m == 0 or not p.coupling > 0:
        raise NoBoundStateError(
            f"no attractive well for omega*k*m = {p.coupling:g}, m = {p.m}"
        )
    c = p.m * p.m - 0.25
    r_star = c / p.coupling
    v_star = p.prefactor * ((1.0 + p.omega**2) * p.k**2 - p.coupling**2 / c)
    return r_star, v_star


def v_eff_oscillator(r, p: OscillatorParams):
    r = _radius(r)
    base = p.base
    bracket = (
        (base.m * base.m - 0.25) / r**2
        - 2.0 * base.coupling / r
        + (1.0 + base.omega**2) * base.k**2
        + p.Omega**2 * r**2
    )
    return _out(base.prefactor * bracket)
