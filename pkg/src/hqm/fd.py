"""Finite-difference radial eigensolver.

The reduced radial equation -(hbar^2/2mu) f'' + V f = E f is discretized
with the three-point stencil on a uniform Dirichlet grid, giving a
symmetric tridiagonal matrix.  Eigenvalues come from Sturm-sequence
bisection and eigenvectors from inverse iteration, so any requested slice of
the spectrum can be extracted without a full diagonalization.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.linalg import solve_banded

from hqm.analytic import coulomb_parameters
from hqm.constants import ELECTRON_MASS, EV, kinetic_prefactor
from hqm.errors import AssemblyError, ConvergenceError, DomainError, UnderResolvedGridError
from hqm.potentials import (
    ModelParams,
    OscillatorParams,
    threshold_energy,
    v_eff_coulomb,
    v_eff_oscillator,
)

log = logging.getLogger(__name__)

# points per characteristic length (1/rho or the oscillator length)
MIN_POINTS_PER_LENGTH = 50
# bisection brackets each eigenvalue to this fraction of max|diag|
EIGENVALUE_RTOL = 1e-12


@dataclass(frozen=True)
class RadialGrid:
    """Interior nodes r_i = i h, i = 1..npts, with f = 0 at r = 0 and r = r_max."""

    r_max: float
    npts: int

    def __post_init__(self):
        if not self.r_max > 0:
            raise DomainError(f"r_max must be positive, got {self.r_max!r}")
        if int(self.npts) != self.npts or self.npts < 1:
            raise DomainError(f"npts must be a positive integer, got {self.npts!r}")

    @property
    def h(self) -> float:
        return self.r_max / (self.npts + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(1, self.npts + 1)

    def refined(self) -> "RadialGrid":
        """Same r_max with the spacing halved."""
        return RadialGrid(self.r_max, 2 * (self.npts + 1) - 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    diag: np.ndarray  # J
    offdiag: np.ndarray  # J
    grid: RadialGrid | None = None

    @property
    def size(self) -> int:
        return self.diag.size

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.diag)))

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.offdiag * v[1:]
        out[1:] += self.offdiag * v[:-1]
        return out

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


class EigenvaluesBelow(NamedTuple):
    values: np.ndarray  # J, ascending
    count_below: int  # Sturm count at the bound


@dataclass
class FDState:
    energy: float  # eV
    vector: np.ndarray  # discrete norm sum v_i^2 h = 1


def assemble(potential: Callable[[np.ndarray], np.ndarray], grid: RadialGrid, mu: float) -> TridiagonalOperator:
    """Three-point kinetic stencil plus the potential on the diagonal."""
    r = grid.nodes
    v = np.asarray(potential(r), dtype=float)
    bad = np.flatnonzero(~np.isfinite(v))
    if bad.size:
        i = int(bad[0])
        raise AssemblyError(f"potential is not finite at node {i + 1} (r = {r[i]:.6e} m)")
    c = kinetic_prefactor(mu) / grid.h**2
    return TridiagonalOperator(diag=2.0 * c + v, offdiag=np.full(grid.npts - 1, -c), grid=grid)


class _Sturm:
    # Python lists beat numpy element access for the sequential recurrence.

    def __init__(self, op: TridiagonalOperator):
        self.d = op.diag.tolist()
        e2 = (op.offdiag**2).tolist()
        self.e2 = e2
        self.pivmin = max(np.finfo(float).tiny * max(e2, default=1.0), np.finfo(float).tiny)

    def count(self, x: float) -> int:
        d, e2, pivmin = self.d, self.e2, self.pivmin
        q = d[0] - x
        if abs(q) < pivmin:
            q = -pivmin
        n = 1 if q < 0 else 0
        for i in range(1, len(d)):
            q = d[i] - x - e2[i - 1] / q
            if abs(q) < pivmin:
                q = -pivmin
            if q < 0:
                n += 1
        return n


def sturm_count(op: TridiagonalOperator, x: float) -> int:
    """Number of eigenvalues of ``op`` strictly below ``x``."""
    return _Sturm(op).count(x)


def gershgorin_bounds(op: TridiagonalOperator) -> tuple[float, float]:
    radius = np.zeros(op.size)
    a = np.abs(op.offdiag)
    radius[:-1] += a
    radius[1:] += a
    return float(np.min(op.diag - radius)), float(np.max(op.diag + radius))


def eigenvalues_below(op: TridiagonalOperator, bound: float, max_count: int, rtol: float = EIGENVALUE_RTOL) -> EigenvaluesBelow:
    """Lowest ``min(max_count, #below bound)`` eigenvalues by bisection.

    Each eigenvalue is bracketed to ``rtol * max|diag|``.
    """
    if max_count < 1:
        raise DomainError("max_count must be at least 1")
    sturm = _Sturm(op)
    lo, hi = gershgorin_bounds(op)
    width = hi - lo
    lo -= 1e-12 * width + np.finfo(float).tiny
    hi += 1e-12 * width + np.finfo(float).tiny
    n_below = sturm.count(bound) if bound < hi else op.size
    wanted = min(max_count, n_below)
    tol = rtol * op.scale

    # (x, count) pairs seen so far; reused to narrow later brackets
    probes = [(lo, 0), (min(bound, hi), n_below)]
    values = np.empty(wanted)
    for j in range(wanted):
        a = max(x for x, c in probes if c <= j)
        b = min(x for x, c in probes if c > j)
        while b - a > tol:
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            c = sturm.count(mid)
            probes.append((mid, c))
            if c > j:
                b = mid
            else:
                a = mid
        values[j] = 0.5 * (a + b)
    return EigenvaluesBelow(values, n_below)


def _normalize(v: np.ndarray, h: float) -> np.ndarray:
    v = v / math.sqrt(float(np.dot(v, v)) * h)
    # phase: first significant component positive
    big = np.flatnonzero(np.abs(v) > 1e-3 * np.max(np.abs(v)))
    if v[big[0]] < 0:
        v = -v
    return v


def eigenvector(op: TridiagonalOperator, lam: float, max_iter: int = 50, rtol: float = 1e-8) -> np.ndarray:
    """Inverse iteration at a converged eigenvalue ``lam`` (J).

    Returns v with sum v_i^2 h = 1 (h from the operator's grid, 1 if none).
    """
    n = op.size
    h = op.grid.h if op.grid is not None else 1.0
    scale = op.scale
    if n == 1:
        return _normalize(np.ones(1), h)
    shift = lam
    ab = np.zeros((3, n))
    ab[0, 1:] = op.offdiag
    ab[2, :-1] = op.offdiag
    v = np.random.default_rng(12345).standard_normal(n)
    v /= np.linalg.norm(v)
    residual = math.inf
    last_change = math.inf
    for it in range(max_iter):
        ab[1] = op.diag - shift
        try:
            w = solve_banded((1, 1), ab, v, check_finite=False)
        except np.linalg.LinAlgError:
            shift = lam + 1e-14 * scale
            continue
        w /= np.linalg.norm(w)
        # a small residual alone still allows neighbour contamination of
        # order |lam - exact| / gap, so also wait for the vector to settle
        change = min(np.linalg.norm(w - v), np.linalg.norm(w + v))
        v = w
        residual = float(np.linalg.norm(op.matvec(v) - lam * v))
        settled = change <= 1e-10 or (it >= 2 and change >= 0.5 * last_change)
        if residual <= rtol * scale and settled:
            return _normalize(v, h)
        last_change = change
    raise ConvergenceError(
        f"inverse iteration did not converge after {max_iter} iterations "
        f"(residual {residual:.3e} J, target {rtol * scale:.3e} J)"
    )


@dataclass(frozen=True)
class CustomModel:
    """Arbitrary potential (J, vectorized in r) for solver checks.

    Solved like the oscillator: the lowest ``count`` states, no threshold.
    """

    potential: Callable[[np.ndarray], np.ndarray]
    mu: float = ELECTRON_MASS


def _model_potential(params):
    if isinstance(params, CustomModel):
        return params.potential, params.mu
    if isinstance(params, OscillatorParams):
        return (lambda r: v_eff_oscillator(r, params)), params.base.mu
    return (lambda r: v_eff_coulomb(r, params)), params.mu


def resolution_length(params) -> float | None:
    """Characteristic length the grid has to resolve, or None if there is none."""
    if isinstance(params, CustomModel):
        return None
    if isinstance(params, OscillatorParams):
        return params.length
    if params.m != 0 and params.coupling > 0:
        return 1.0 / coulomb_parameters(0, params).rho
    return None


def check_resolution(params, grid: RadialGrid) -> None:
    length = resolution_length(params)
    if length is None:
        return
    limit = length / MIN_POINTS_PER_LENGTH
    if grid.h > limit:
        suggested = int(math.ceil(grid.r_max / limit))
        raise UnderResolvedGridError(
            f"grid spacing {grid.h:.3e} m exceeds {limit:.3e} m "
            f"(1/{MIN_POINTS_PER_LENGTH} of {length:.3e} m); use npts >= {suggested}",
            suggested_npts=suggested,
        )


def default_grid(params, count: int = 3, points_per_length: int = 100) -> RadialGrid:
    """Grid extending to max(12/rho_min, 10 oscillator lengths)."""
    if isinstance(params, OscillatorParams):
        length = params.length
        r_max = 10.0 * length
        base = params.base
        if base.m != 0 and base.coupling > 0:
            rho_min = coulomb_parameters(count - 1, base).rho
            r_max = max(r_max, 12.0 / rho_min)
        return RadialGrid(r_max, int(math.ceil(points_per_length * r_max / length)))
    if params.m != 0 and params.coupling > 0:
        rho0 = coulomb_parameters(0, params).rho
        rho_min = coulomb_parameters(count - 1, params).rho
        r_max = 12.0 / rho_min
        return RadialGrid(r_max, int(math.ceil(points_per_length * r_max * rho0)))
    return RadialGrid(12e-9, 24000)


def solve_bound_states(params, grid: RadialGrid | None = None, count: int | None = None) -> list[FDState]:
    """Finite-difference eigenpairs, energies in eV.

    Coulomb model: states below the threshold energy (at most ``count``).
    Oscillator model: the lowest ``count`` states (default 5).
    """
    if grid is None:
        if isinstance(params, CustomModel):
            raise DomainError("a custom potential needs an explicit grid")
        grid = default_grid(params, count or 3)
    check_resolution(params, grid)
    potential, mu = _model_potential(params)
    op = assemble(potential, grid, mu)
    if isinstance(params, (OscillatorParams, CustomModel)):
        wanted = count or 5
        _, hi = gershgorin_bounds(op)
        found = eigenvalues_below(op, hi, wanted)
    else:
        wanted = count or grid.npts
        found = eigenvalues_below(op, threshold_energy(params), wanted)
    return [FDState(float(lam / EV), eigenvector(op, lam)) for lam in found.values]


def count_bound_states(params: ModelParams, grid: RadialGrid) -> int:
    """Sturm count of discrete eigenvalues below the Coulomb threshold."""
    potential, mu = _model_potential(params)
    op = assemble(potential, grid, mu)
    return sturm_count(op, threshold_energy(params))


@dataclass
class RichardsonResult:
    order: float
    energies: list[float]  # eV, coarse to fine
    spacings: list[float]  # m
    reliable: bool = True
    note: str | None = None


def richardson_order(params, grid: RadialGrid, refinements: int = 3, noise_floor: float = 1e-10) -> RichardsonResult:
    """Empirical convergence order of the ground-state energy.

    The grid spacing is halved ``refinements - 1`` times; the order comes
    from the last three levels, log2((E1 - E2) / (E2 - E3)).  Differences
    below the noise floor make the estimate unreliable and are reported
    rather than raised.  The floor is the larger of ``noise_floor`` * |E|
    and ten times the bisection tolerance on the finest grid, which grows
    like 1/h^2.
    """
    if refinements < 3:
        raise DomainError("need at least three grid levels for an order estimate")
    grids = [grid]
    for _ in range(refinements - 1):
        grids.append(grids[-1].refined())
    energies = [solve_bound_states(params, g, count=1)[0].energy for g in grids]
    e1, e2, e3 = energies[-3:]
    d1, d2 = e1 - e2, e2 - e3
    spacings = [g.h for g in grids]
    potential, mu = _model_potential(params)
    bisection = 10.0 * EIGENVALUE_RTOL * assemble(potential, grids[-1], mu).scale / EV
    floor = max(noise_floor * abs(e3), bisection)
    if abs(d2) < floor or abs(d1) < floor:
        return RichardsonResult(
            float("nan"), energies, spacings, reliable=False,
            note=f"energy differences ({d1:.3e}, {d2:.3e} eV) are below the noise floor {floor:.3e} eV",
        )
    if d1 * d2 <= 0:
        raise ConvergenceError(f"non-monotone refinement: differences {d1:.3e}, {d2:.3e} eV")
    return RichardsonResult(math.log2(d1 / d2), energies, spacings)


@dataclass
class SweepResult:
    """Eigenvalue tracks after overlap-based state following.

    ``energies[t, j]`` is track ``t`` at parameter ``j``;
    ``permutations[j][t]`` is the raw eigenpair index used for track ``t``;
    ``overlaps[t, j]`` is the overlap linking step j to j + 1.
    """

    parameters: list
    energies: np.ndarray
    permutations: list[list[int]]
    overlaps: np.ndarray
    warnings: list[str] = field(default_factory=list)


def greedy_assignment(overlap: np.ndarray) -> list[int]:
    """Match rows to columns by descending overlap; ties go to lower indices."""
    n_rows, n_cols = overlap.shape
    order = sorted(
        ((overlap[i, j], i, j) for i in range(n_rows) for j in range(n_cols)),
        key=lambda t: (-t[0], t[1], t[2]),
    )
    assigned = [-1] * n_rows
    used = set()
    for _, i, j in order:
        if assigned[i] < 0 and j not in used:
            assigned[i] = j
            used.add(j)
    return assigned


def follow_states(sweep: Sequence[tuple[object, Sequence[float], np.ndarray]], min_overlap: float = 0.5) -> SweepResult:
    """Connect eigenpairs across a parameter sweep into continuous tracks.

    ``sweep`` holds (parameter, energies, vectors) per step with vectors as
    columns sampled on a common grid.  Tracks start in energy order at the
    first step.
    """
    if not sweep:
        raise DomainError("empty sweep")
    n_tracks = min(len(e) for _, e, _ in sweep)
    steps = len(sweep)
    energies = np.empty((n_tracks, steps))
    overlaps = np.full((n_tracks, max(steps - 1, 0)), np.nan)
    perms = [list(range(n_tracks))]
    warnings: list[str] = []

    first = np.asarray(sweep[0][1])
    energies[:, 0] = first[:n_tracks]
    current = np.asarray(sweep[0][2])[:, :n_tracks]
    for j in range(1, steps):
        param, e_next, v_next = sweep[j]
        v_next = np.asarray(v_next)
        vn = v_next / np.linalg.norm(v_next, axis=0)
        vc = current / np.linalg.norm(current, axis=0)
        ov = np.abs(vc.T @ vn)
        perm = greedy_assignment(ov)
        perms.append(perm)
        for t, col in enumerate(perm):
            energies[t, j] = e_next[col]
            overlaps[t, j - 1] = ov[t, col]
            if ov[t, col] < min_overlap:
                warnings.append(
                    f"track {t}: overlap {ov[t, col]:.3f} between steps {j - 1} and {j} "
                    f"(parameter {param!r}); track may be discontinuous"
                )
        current = v_next[:, perm]
    for w in warnings:
        log.warning(w)
    return SweepResult(
        parameters=[s[0] for s in sweep],
        energies=energies,
        permutations=perms,
        overlaps=overlaps,
        warnings=warnings,
    )


def _solve_point(args):
    params, grid, count = args
    states = solve_bound_states(params, grid, count)
    return [s.energy for s in states], np.column_stack([s.vector for s in states])


def sweep(param_list: Sequence, grid: RadialGrid, count: int, labels: Sequence | None = None, workers: int = 1) -> SweepResult:
    """Solve at every parameter set on one common grid and follow the states.

    Points may be solved in parallel processes; results are assembled in
    input order either way.
    """
    jobs = [(p, grid, count) for p in param_list]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            solved = list(pool.map(_solve_point, jobs))
    else:
        solved = [_solve_point(j) for j in jobs]
    labels = list(labels) if labels is not None else list(range(len(param_list)))
    return follow_states([(lab, e, v) for lab, (e, v) in zip(labels, solved)])
