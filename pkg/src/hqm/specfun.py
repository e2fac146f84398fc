"""Special functions for the closed-form bound states.

Only the terminating branch of 1F1(-n; b; x) is provided; it is a polynomial
of degree n and needs no convergence control.  The generalized Laguerre
polynomial is an independent route to the same numbers.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import linalg, special

from hqm.errors import DomainError


def _check_degree(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"degree must be a nonnegative integer, got {n!r}")
    return int(n)


def confluent_1f1_coefficients(n: int, b: float) -> np.ndarray:
    """Coefficients c_0..c_n of 1F1(-n; b; x) = sum_j c_j x^j."""
    n = _check_degree(n)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")
    coeffs = np.empty(n + 1)
    coeffs[0] = 1.0
    for j in range(n):
        coeffs[j + 1] = coeffs[j] * (j - n) / ((b + j) * (j + 1))
    return coeffs


def confluent_1f1_truncated(n: int, b: float, x):
    """Evaluate the polynomial 1F1(-n; b; x).

    Terms are generated by the forward ratio
    t_{j+1} = t_j (j - n) x / ((b + j)(j + 1)) and summed in order.
    Scalars in, float out; arrays in, arrays out.
    """
    n = _check_degree(n)
    if not b > 0:
        raise DomainError(f"b must be positive, got {b!r}")
    x = np.asarray(x, dtype=float)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for j in range(n):
        term = term * ((j - n) * x / ((b + j) * (j + 1)))
        total = total + term
    return float(total) if total.ndim == 0 else total


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial L_n^(alpha)(x) by the three-term recurrence."""
    n = _check_degree(n)
    if not alpha > -1:
        raise DomainError(f"alpha must exceed -1, got {alpha!r}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return float(prev) if prev.ndim == 0 else prev
    cur = 1.0 + alpha - x
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return float(cur) if cur.ndim == 0 else cur


def pochhammer(a: float, n: int) -> float:
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def confluent_1f1_via_laguerre(n: int, b: float, x):
    """1F1(-n; b; x) = n! / (b)_n * L_n^(b-1)(x)."""
    return math.factorial(n) / pochhammer(b, n) * laguerre(n, b - 1.0, x)


def _check_order(nu) -> int:
    if int(nu) != nu or nu < 0:
        raise DomainError(f"Bessel order must be a nonnegative integer, got {nu!r}")
    return int(nu)


def bessel_j(nu: int, x):
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("bessel_j requires x >= 0")
    out = special.jv(nu, x)
    return float(out) if out.ndim == 0 else out


def bessel_y(nu: int, x):
    nu = _check_order(nu)
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("bessel_y is singular at x = 0 and undefined for x < 0")
    out = special.yv(nu, x)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=32)
def _gauss_laguerre_cached(npts: int):
    # Golub-Welsch on the Jacobi matrix of the Laguerre weight e^{-t}
    i = np.arange(npts, dtype=float)
    diag = 2.0 * i + 1.0
    off = i[1:]
    nodes, vecs = linalg.eigh_tridiagonal(diag, off)
    weights = vecs[0, :] ** 2
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return nodes, weights


def gauss_laguerre(npts: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals of the form int_0^inf e^{-t} f(t) dt.

    Exact for polynomials of degree up to 2*npts - 1.
    """
    if int(npts) != npts or not 1 <= npts <= 200:
        raise DomainError(f"npts must be an integer in [1, 200], got {npts!r}")
    return _gauss_laguerre_cached(int(npts))
