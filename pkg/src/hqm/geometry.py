"""Helical metric in cylindrical coordinates (r, phi, z).

The line element is dr^2 + r^2 dphi^2 + (dz + omega r dphi)^2, so the metric
only depends on r and the torsion omega.
"""

from __future__ import annotations

import numpy as np

from hqm.errors import DomainError


def _check_radius(r: float) -> None:
    if not r > 0:
        raise DomainError(f"metric is defined for r > 0, got r={r!r}")


def metric_tensor(r: float, omega: float) -> np.ndarray:
    """Covariant metric g_ij, ordered (r, phi, z)."""
    _check_radius(r)
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, r * r * (1.0 + omega * omega), omega * r],
            [0.0, omega * r, 1.0],
        ]
    )


def inverse_metric(r: float, omega: float) -> np.ndarray:
    """Contravariant metric g^ij, ordered (r, phi, z)."""
    _check_radius(r)
    return np.array(
        [
            [1.0, 0.0, 0.0],
            [0.0, 1.0 / (r * r), -omega / r],
            [0.0, -omega / r, 1.0 + omega * omega],
        ]
    )


def metric_determinant(r: float, omega: float) -> float:
    return float(np.linalg.det(metric_tensor(r, omega)))


def _laplace_beltrami(r, psi, m, k, omega):
    # Divergence form (1/sqrt g) d_i (sqrt g g^ij d_j Psi) acting on
    # exp(i m phi) exp(i k z) psi(r); the common phase factor is dropped.
    # Angular and axial derivatives are exact: d_phi -> i m, d_z -> i k.
    h = r[1] - r[0]
    inner = slice(1, -1)
    rc = r[inner]
    mid = 0.5 * (r[1:] + r[:-1])
    dpsi_mid = np.diff(psi) / h
    psi_mid = 0.5 * (psi[1:] + psi[:-1])

    ginv_mid = np.array([inverse_metric(x, omega) for x in mid])
    ginv_c = np.array([inverse_metric(x, omega) for x in rc])

    # radial flux sqrt(g) g^{rj} d_j Psi at half nodes
    flux_r = mid * (
        ginv_mid[:, 0, 0] * dpsi_mid
        + ginv_mid[:, 0, 1] * 1j * m * psi_mid
        + ginv_mid[:, 0, 2] * 1j * k * psi_mid
    )
    div_r = np.diff(flux_r) / h

    dpsi_c = (psi[2:] - psi[:-2]) / (2.0 * h)
    grad = (dpsi_c, 1j * m * psi[inner], 1j * k * psi[inner])
    div_phi = 1j * m * rc * sum(ginv_c[:, 1, j] * grad[j] for j in range(3))
    div_z = 1j * k * rc * sum(ginv_c[:, 2, j] * grad[j] for j in range(3))
    return (div_r + div_phi + div_z) / rc


def _separated_radial(r, psi, m, k, omega):
    h = r[1] - r[0]
    rc = r[1:-1]
    mid = 0.5 * (r[1:] + r[:-1])
    radial = np.diff(mid * np.diff(psi) / h) / (h * rc)
    coeff = -(m * m) / rc**2 + 2.0 * omega * k * m / rc - (1.0 + omega**2) * k * k
    return radial + coeff * psi[1:-1]


def radial_reduction_residual(r, psi, m: int, k: float, omega: float) -> float:
    """Compare the full 3-D operator with the separated radial operator.

    Both act on ``psi`` sampled at the uniform nodes ``r`` and use the same
    conservative central difference in r.  The returned max-norm difference
    is divided by the largest separated term magnitude, so it is
    dimensionless and independent of the units chosen for r and k.
    """
    r = np.asarray(r, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if r.shape != psi.shape or r.ndim != 1:
        raise DomainError("r and psi must be 1-D arrays of equal length")
    if r.size < 5:
        raise DomainError(f"need at least 5 grid points, got {r.size}")
    if not np.all(r > 0):
        raise DomainError("grid must lie in r > 0")
    steps = np.diff(r)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise DomainError("grid must be uniform")

    full = _laplace_beltrami(r, psi, m, k, omega)
    sep = _separated_radial(r, psi, m, k, omega)

    rc = r[1:-1]
    h = steps[0]
    p = np.abs(psi)
    scale = max(
        np.max(np.abs(np.diff(0.5 * (r[1:] + r[:-1]) * np.diff(psi) / h) / (h * rc))),
        np.max((m * m / rc**2 + abs(2.0 * omega * k * m) / rc + (1.0 + omega**2) * k * k) * p[1:-1]),
        np.finfo(float).tiny,
    )
    return float(np.max(np.abs(full - sep)) / scale)
