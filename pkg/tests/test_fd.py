import math

import numpy as np
import pytest

from hqm.analytic import coulomb_parameters, energy_physical, radial_wavefunction
from hqm.constants import ELECTRON_MASS, EV, HBAR, kinetic_prefactor
from hqm.errors import AssemblyError, ConvergenceError, DomainError, UnderResolvedGridError
from hqm.fd import (
    CustomModel,
    RadialGrid,
    TridiagonalOperator,
    assemble,
    count_bound_states,
    eigenvalues_below,
    eigenvector,
    follow_states,
    gershgorin_bounds,
    greedy_assignment,
    richardson_order,
    solve_bound_states,
    sturm_count,
    sweep,
)
from hqm.potentials import ModelParams, oscillator_parameters, threshold_energy, v_eff_coulomb
from hqm.reports import oscillator_grid

OMEGA0 = 2 * math.pi * 5e14
K = kinetic_prefactor(ELECTRON_MASS)
FREE = CustomModel(lambda r: np.zeros_like(r))


def free_operator(npts, r_max=1e-9):
    grid = RadialGrid(r_max, npts)
    return grid, assemble(lambda r: np.zeros_like(r), grid, ELECTRON_MASS)


def test_grid_geometry():
    g = RadialGrid(4e-9, 3)
    assert g.h == 1e-9
    assert np.allclose(g.nodes, [1e-9, 2e-9, 3e-9], rtol=1e-15)
    fine = g.refined()
    assert fine.npts == 7 and fine.h == pytest.approx(g.h / 2, rel=1e-15)
    for bad in ((0.0, 10), (1e-9, 0)):
        with pytest.raises(DomainError):
            RadialGrid(*bad)


def test_assemble_spot_check():
    grid = RadialGrid(4e-10, 3)
    v = lambda r: 1e-19 * r / 1e-10
    op = assemble(v, grid, ELECTRON_MASS)
    c = HBAR**2 / (2 * ELECTRON_MASS * grid.h**2)
    assert op.diag[1] == pytest.approx(HBAR**2 / (ELECTRON_MASS * grid.h**2) + 2e-19, rel=1e-14)
    assert np.allclose(op.offdiag, -c, rtol=1e-14)
    assert np.allclose(op.dense(), op.dense().T)


def test_assemble_names_bad_node():
    grid = RadialGrid(4e-10, 3)
    with pytest.raises(AssemblyError, match="node 1"):
        assemble(lambda r: np.where(np.isclose(r, 2e-10), np.inf, 0.0), grid, ELECTRON_MASS)


def test_single_point_grid():
    grid, op = free_operator(1)
    vals = eigenvalues_below(op, 10 * op.diag[0], 5).values
    assert len(vals) == 1
    assert vals[0] == pytest.approx(op.diag[0], rel=1e-12)


def test_discrete_laplacian_closed_form():
    grid, op = free_operator(3)
    exact = [K * (2 - 2 * math.cos(j * math.pi / 4)) / grid.h**2 for j in (1, 2, 3)]
    res = eigenvalues_below(op, gershgorin_bounds(op)[1], 3)
    assert res.count_below == 3
    for got, want in zip(res.values, exact):
        assert got == pytest.approx(want, rel=1e-12)


def test_diagonal_matrix():
    op = TridiagonalOperator(np.array([1e-19, 2e-19, 3e-19]), np.zeros(2))
    res = eigenvalues_below(op, 2.5e-19, 10)
    assert res.count_below == 2
    assert res.values == pytest.approx([1e-19, 2e-19], rel=1e-12)
    v = eigenvector(op, res.values[1])
    assert np.allclose(np.abs(v) / np.max(np.abs(v)), [0, 1, 0], atol=1e-12)
    assert len(eigenvalues_below(op, 0.5e-19, 10).values) == 0


def test_eigenvector_box_sine():
    grid, op = free_operator(200)
    lam = eigenvalues_below(op, gershgorin_bounds(op)[1], 1).values[0]
    v = eigenvector(op, lam)
    s = np.sin(math.pi * grid.nodes / grid.r_max)
    overlap = abs(v @ s) / (np.linalg.norm(v) * np.linalg.norm(s))
    assert overlap >= 1 - 1e-10
    assert np.sum(v * v) * grid.h == pytest.approx(1.0, rel=1e-12)
    residual = np.linalg.norm(op.matvec(v) - lam * v) / np.linalg.norm(v)
    assert residual <= 1e-8 * op.scale


def test_eigenvector_nonconvergence_reported():
    op = TridiagonalOperator(np.array([1.0, 2.0, 3.0]), np.array([0.1, 0.1]))
    with pytest.raises(ConvergenceError):
        eigenvector(op, 1.5, max_iter=1)


def test_sturm_consistency_and_ordering():
    p = ModelParams(2.0, 5e9, 1)
    grid = RadialGrid(4e-9, 2000)
    op = assemble(lambda r: v_eff_coulomb(r, p), grid, ELECTRON_MASS)
    for bound in (threshold_energy(p), 0.0, 3.5 * EV):
        res = eigenvalues_below(op, bound, grid.npts)
        assert len(res.values) == res.count_below == sturm_count(op, bound)
        assert all(b >= a for a, b in zip(res.values, res.values[1:]))


def test_dense_cross_check():
    rng = np.random.default_rng(0)
    op = TridiagonalOperator(rng.normal(size=40), rng.normal(size=39))
    want = np.linalg.eigvalsh(op.dense())
    got = eigenvalues_below(op, gershgorin_bounds(op)[1], 40).values
    assert np.allclose(got, want, atol=1e-10)


def test_coulomb_states_vs_analytic():
    p = ModelParams(2.0, 5e9, 1)
    grid = RadialGrid(4e-9, 4000)
    states = solve_bound_states(p, grid, count=3)
    for n, s in enumerate(states):
        assert s.energy == pytest.approx(energy_physical(n, p), abs=1e-2)
        assert s.energy < threshold_energy(p) / EV
    f = radial_wavefunction(0, p, grid.nodes)
    overlap = abs(np.sum(states[0].vector * f) * grid.h)
    assert overlap >= 0.9999
    gram = np.array([[np.sum(a.vector * b.vector) * grid.h for b in states] for a in states])
    assert np.allclose(gram, np.eye(3), atol=1e-8)


def test_under_resolved_grid_refused():
    p = ModelParams(2.0, 5e9, 1)
    with pytest.raises(UnderResolvedGridError) as info:
        solve_bound_states(p, RadialGrid(12e-9, 100))
    suggested = info.value.suggested_npts
    assert suggested > 100
    solve_bound_states(p, RadialGrid(12e-9, suggested), count=1)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_no_bound_states_without_torsion(m):
    p = ModelParams(0.0, 5e9, m)
    assert count_bound_states(p, RadialGrid(12e-9, 24000)) == 0
    assert solve_bound_states(p, RadialGrid(12e-9, 24000)) == []


def test_torsion_free_oscillator_oracle():
    op = oscillator_parameters(ModelParams(0.0, 0.0, 1), OMEGA0)
    states = solve_bound_states(op, count=5)
    quantum = HBAR * OMEGA0 / EV
    for n, s in enumerate(states):
        assert s.energy == pytest.approx(quantum * (2 * n + 2), rel=1e-3)
    assert quantum * 2 == pytest.approx(4.135668, abs=1e-6)


def test_custom_model_needs_grid():
    with pytest.raises(DomainError):
        solve_bound_states(FREE)


def test_richardson_box():
    res = richardson_order(FREE, RadialGrid(1e-9, 99))
    assert res.reliable and res.order == pytest.approx(2.0, abs=0.05)


def test_richardson_coulomb():
    res = richardson_order(ModelParams(2.0, 5e9, 1), RadialGrid(3e-9, 1500))
    assert res.reliable and res.order == pytest.approx(2.0, abs=0.2)
    assert res.spacings[0] == pytest.approx(2 * res.spacings[1], rel=1e-3)


def test_richardson_converged_flagged():
    res = richardson_order(FREE, RadialGrid(1e-9, 20000))
    assert not res.reliable and math.isnan(res.order) and "noise floor" in res.note


def test_richardson_needs_three_levels():
    with pytest.raises(DomainError):
        richardson_order(FREE, RadialGrid(1e-9, 99), refinements=2)


def test_greedy_assignment():
    assert greedy_assignment(np.eye(3)) == [0, 1, 2]
    assert greedy_assignment(np.array([[0.1, 0.9], [0.8, 0.2]])) == [1, 0]
    # ties resolve toward lower indices
    assert greedy_assignment(np.full((2, 2), 0.5)) == [0, 1]


def test_identical_spectra_identity_permutation():
    v = np.eye(4)[:, :3]
    res = follow_states([(0, [1.0, 2.0, 3.0], v), (1, [1.0, 2.0, 3.0], v)])
    assert res.permutations == [[0, 1, 2], [0, 1, 2]] and not res.warnings


def test_two_level_crossing():
    # H(x) = diag(x, -x): eigenvalues cross at x = 0 and the sorted
    # eigenvectors swap, so state following must swap labels there
    steps = []
    for x in (-1.0, -0.5, 0.5, 1.0):
        vals, vecs = np.linalg.eigh(np.diag([x, -x]))
        steps.append((x, list(vals), vecs))
    res = follow_states(steps)
    assert res.permutations == [[0, 1], [0, 1], [1, 0], [1, 0]]
    # track 0 follows e1 (energy x) straight through the crossing
    assert np.allclose(res.energies[0], [-1.0, -0.5, 0.5, 1.0])
    assert np.allclose(res.energies[1], [1.0, 0.5, -0.5, -1.0])
    assert np.allclose(res.overlaps, 1.0)


def test_low_overlap_warns():
    eye = np.eye(4)
    res = follow_states([(0, [0.0, 1.0], eye[:, :2]), (1, [0.0, 1.0], eye[:, 2:])])
    assert len(res.warnings) == 2 and "track 0" in res.warnings[0]


@pytest.fixture(scope="module")
def oscillator_sweep():
    omegas = np.linspace(1.0, 30.0, 59)
    grid = oscillator_grid(OMEGA0, 1, npts=1000)
    params = [oscillator_parameters(ModelParams(w, 1e9, 1), OMEGA0) for w in omegas]
    return omegas, sweep(params, grid, 5, labels=list(omegas))


def test_oscillator_sweep_smooth(oscillator_sweep):
    omegas, res = oscillator_sweep
    assert not res.warnings
    jumps = np.abs(np.diff(res.energies, axis=1)) / np.abs(res.energies[:, :-1])
    assert np.max(jumps) < 0.05


def test_oscillator_hellmann_feynman(oscillator_sweep):
    omegas, res = oscillator_sweep
    shift = (1 + omegas**2) * K * 1e18 / EV
    resid = res.energies - shift
    assert np.all(np.diff(resid, axis=1) <= 1e-9 * np.abs(resid[:, 1:]))


def test_oscillator_m_asymmetry():
    grid = oscillator_grid(OMEGA0, 1, npts=1000)
    plus = solve_bound_states(oscillator_parameters(ModelParams(5.0, 1e9, 1), OMEGA0), grid, 5)
    minus = solve_bound_states(oscillator_parameters(ModelParams(5.0, 1e9, -1), OMEGA0), grid, 5)
    assert all(a.energy < b.energy for a, b in zip(plus, minus))


def test_parallel_sweep_matches_serial():
    grid = oscillator_grid(OMEGA0, 1, npts=600)
    params = [oscillator_parameters(ModelParams(w, 1e9, 1), OMEGA0) for w in (1.0, 2.0, 3.0, 4.0)]
    serial = sweep(params, grid, 3)
    parallel = sweep(params, grid, 3, workers=2)
    assert np.array_equal(serial.energies, parallel.energies)
    assert serial.permutations == parallel.permutations
