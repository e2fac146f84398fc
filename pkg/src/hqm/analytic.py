"""Closed-form bound states of the Coulomb-like radial problem.

The regular solution is

    f(r) = C_n r^{1/2+|m|} exp(-rho r) 1F1(-n; 1 + 2|m|; 2 rho r)

with rho = k m omega / (n + |m| + 1/2).  Two sign conventions coexist:

* ``energy_physical`` is an eigenvalue of the expanded radial operator in
  :mod:`hqm.potentials`; it sits just below the threshold
  hbar^2 k^2 (1 + omega^2) / 2mu and is what the finite-difference solver
  returns.
* ``energy_paper`` is the published closed form, which is exactly the
  negative of ``energy_physical``.  Use it to compare with published tables.

Energies returned by the public functions are in eV; wavefunctions are
normalized as int_0^inf f(r)^2 dr = 1 with r in metres.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.integrate import trapezoid

from hqm.constants import CONSTANTS, EV, unit_energy
from hqm.errors import DomainError, NoBoundStateError
from hqm.potentials import ModelParams
from hqm.specfun import (
    bessel_j,
    bessel_y,
    confluent_1f1_truncated,
    confluent_1f1_via_laguerre,
    gauss_laguerre,
)


@dataclass(frozen=True)
class CoulombParameters:
    rho: float  # 1/m
    a: float
    b: float
    N: float  # n + |m| + 1/2


@dataclass(frozen=True)
class BoundState:
    n: int
    m: int
    energy_physical: float  # J
    energy_paper: float  # J
    params: CoulombParameters
    norm_const: float
    r: np.ndarray = field(repr=False)
    profile: np.ndarray = field(repr=False)

    @property
    def energy_physical_ev(self) -> float:
        return self.energy_physical / EV

    @property
    def energy_paper_ev(self) -> float:
        return self.energy_paper / EV


@dataclass(frozen=True)
class DensityProfile:
    r: np.ndarray
    density: np.ndarray
    peak_radius: float
    integral: float
    warning: str | None = None


def _check_n(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"radial quantum number must be a nonnegative integer, got {n!r}")
    return int(n)


def require_bound_state(p: ModelParams) -> None:
    if p.m == 0:
        raise NoBoundStateError("m = 0 has no Coulomb-like term and no bound states")
    if not p.coupling > 0:
        raise NoBoundStateError(
            f"omega*k*m = {p.coupling:g} is not attractive; no bound states"
        )


def coulomb_parameters(n: int, p: ModelParams) -> CoulombParameters:
    n = _check_n(n)
    require_bound_state(p)
    N = n + abs(p.m) + 0.5
    return CoulombParameters(rho=float(_exact_rho(n, p)), a=float(-n), b=1.0 + 2.0 * abs(p.m), N=N)


def _exact_rho(n: int, p: ModelParams) -> Fraction:
    return Fraction(p.k) * p.m * Fraction(p.omega) / Fraction(2 * n + 2 * abs(p.m) + 1, 2)


def _exact_prefactor_ev(p: ModelParams) -> Fraction:
    # hbar^2 / (2 mu) / eV as an exact rational of the stored doubles
    hbar = Fraction(CONSTANTS.hbar)
    return hbar * hbar / (2 * Fraction(p.mu)) / Fraction(EV)


def energy_paper(n: int, p: ModelParams) -> float:
    """Published closed-form spectrum, in eV.

    Evaluated verbatim for any input; it describes a bound state only when
    omega*k*m > 0 and |m| >= 1.  The arithmetic is exact on the input
    doubles and rounded once, so the result is correctly rounded.
    """
    n = _check_n(n)
    am = abs(p.m)
    w2 = Fraction(p.omega) ** 2
    num = 4 * p.m * p.m + (1 + 2 * n) * (1 + w2) * (1 + 2 * n + 4 * am)
    den = (1 + 2 * n + 2 * am) ** 2
    return float(-_exact_prefactor_ev(p) * Fraction(p.k) ** 2 * num / den)


def energy_physical(n: int, p: ModelParams) -> float:
    """Eigenvalue of the expanded radial operator, in eV.

    Obtained from the quantization rule E = V_inf - hbar^2 rho^2 / 2mu with
    rho = k m omega / N taken exactly (no intermediate rounding).
    """
    coulomb_parameters(n, p)  # existence gate
    return _energy_from_exact_rho(_exact_rho(n, p), p)


def _energy_from_exact_rho(rho: Fraction, p: ModelParams) -> float:
    k2 = Fraction(p.k) ** 2
    return float(_exact_prefactor_ev(p) * ((1 + Fraction(p.omega) ** 2) * k2 - rho * rho))


def energy_from_rho(rho: float, p: ModelParams) -> float:
    """Invert rho^2 = (1 + omega^2) k^2 - 2 mu E / hbar^2 for E, in eV."""
    return _energy_from_exact_rho(Fraction(rho), p)


def asymptotic_energy(n: int, p: ModelParams) -> float:
    """Large-n expansion of ``energy_paper`` up to 1/n^2, in eV."""
    n = _check_n(n)
    if n < 1:
        raise DomainError("the large-n expansion needs n >= 1")
    u = unit_energy(p.k, p.mu)
    return -u * (1.0 + p.omega**2) + u * p.omega**2 * p.m**2 / n**2


def _quadrature_order(n: int, m: int) -> int:
    # integrand t^{1+2|m|} F(t)^2 has degree 1 + 2|m| + 2n
    degree = 1 + 2 * abs(m) + 2 * n
    return min(200, max(64, degree // 2 + 1))


def log_normalization_constant(n: int, p: ModelParams) -> float:
    cp = coulomb_parameters(n, p)
    am = abs(p.m)
    t, w = gauss_laguerre(_quadrature_order(n, p.m))
    F = confluent_1f1_truncated(n, cp.b, t)
    # int f^2 dr = C^2 (2 rho)^{-(2+2|m|)} int e^{-t} t^{1+2|m|} F(t)^2 dt
    with np.errstate(under="ignore"):
        integral = float(np.sum(w * t ** (1 + 2 * am) * F * F))
    return 0.5 * ((2 + 2 * am) * math.log(2.0 * cp.rho) - math.log(integral))


def normalization_constant(n: int, p: ModelParams) -> float:
    """C_n > 0 making int_0^inf f^2 dr = 1 (units m^{-(1+|m|)})."""
    return math.exp(log_normalization_constant(n, p))


def _profile(n, p, r, hypergeometric):
    cp = coulomb_parameters(n, p)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("radial wavefunction needs r >= 0")
    log_c = log_normalization_constant(n, p)
    out = np.zeros_like(r)
    pos = r > 0
    rp = r[pos]
    envelope = np.exp(log_c + (0.5 + abs(p.m)) * np.log(rp) - cp.rho * rp)
    out[pos] = envelope * hypergeometric(n, cp.b, 2.0 * cp.rho * rp)
    return float(out) if out.ndim == 0 else out


def radial_wavefunction(n: int, p: ModelParams, r):
    """Normalized f(r) built from the truncated 1F1 series."""
    return _profile(n, p, r, confluent_1f1_truncated)


def radial_wavefunction_laguerre(n: int, p: ModelParams, r):
    """Same state built from L_n^{(2|m|)}; used as a cross-check."""
    return _profile(n, p, r, confluent_1f1_via_laguerre)


def bound_state(n: int, p: ModelParams, r=None, npts: int = 2000) -> BoundState:
    """Bundle energies, Coulomb parameters and a sampled profile.

    Without an explicit grid the profile covers [0, 12/rho] uniformly.
    """
    cp = coulomb_parameters(n, p)
    if r is None:
        r = np.linspace(0.0, 12.0 / cp.rho, npts)
    r = np.asarray(r, dtype=float)
    e_phys = energy_physical(n, p) * EV
    return BoundState(
        n=int(n),
        m=p.m,
        energy_physical=e_phys,
        energy_paper=energy_paper(n, p) * EV,
        params=cp,
        norm_const=normalization_constant(n, p),
        r=r,
        profile=radial_wavefunction(n, p, r),
    )


def probability_density(n: int, p: ModelParams, r) -> DensityProfile:
    """Sample P(r) = f(r)^2 on ``r`` and locate its maximum.

    The trapezoid integral is reported so callers can see truncation; a
    grid ending before 10/rho carries a warning in the result.
    """
    cp = coulomb_parameters(n, p)
    r = np.asarray(r, dtype=float)
    f = radial_wavefunction(n, p, r)
    density = f * f
    warning = None
    if r.max() < 10.0 / cp.rho:
        warning = (
            f"grid ends at {r.max():.3e} m, before 10/rho = {10.0 / cp.rho:.3e} m; "
            "density is truncated"
        )
    return DensityProfile(
        r=r,
        density=density,
        peak_radius=float(r[int(np.argmax(density))]),
        integral=float(trapezoid(density, r)),
        warning=warning,
    )


def count_nodes(values, rel_floor: float = 1e-10) -> int:
    """Sign changes of a sampled function, ignoring near-zero noise."""
    values = np.asarray(values, dtype=float)
    floor = rel_floor * np.max(np.abs(values))
    signs = np.sign(values[np.abs(values) > floor])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def free_radial_solution(m: int, q: float, r, coeffs: tuple[float, float] = (1.0, 0.0)):
    """A J_|m|(q r) + B Y_|m|(q r), the torsion-free continuum solution.

    This is the Bessel-form radial function; the reduced function that
    satisfies f'' + [q^2 - (m^2 - 1/4)/r^2] f = 0 is sqrt(r) times it.
    """
    if not q > 0:
        raise DomainError(f"q must be positive (evanescent regime otherwise), got {q!r}")
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("free solution is evaluated at r > 0")
    A, B = coeffs
    x = q * r
    out = A * bessel_j(abs(m), x)
    if B != 0:
        out = out + B * bessel_y(abs(m), x)
    return out


def free_wavenumber(energy: float, p: ModelParams) -> float:
    """q = sqrt(2 mu E / hbar^2 - k^2) for the torsion-free case; ``energy`` in J."""
    q2 = energy / p.prefactor - p.k**2
    if not q2 > 0:
        raise DomainError("energy lies below the free threshold; q is imaginary")
    return math.sqrt(q2)
