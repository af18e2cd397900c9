"""Tests for the variational electrostatic solver and its post-processing"""

import numpy as np
import pytest

from electrostatics import (
    GridConfig,
    PointCharge,
    SolverConfig,
    charge_flux,
    convexity_uniqueness_check,
    energy_of_static_solution,
    evaluate_A1,
    perturb_solution,
    potential_at,
    solution_table,
    solve_electrostatic,
)
from electrostatics.born import born_central_value, born_field_energy, defect_potential
from guidance.a1_profile import electron_nucleus_pair, solve_a1
from physics.errors import LipschitzBoundError, SolverConvergenceError, UnsupportedGeometryError, UsageError

BETA = 1.0


@pytest.fixture(scope='module')
def coarse_config():
    return SolverConfig(grid=GridConfig(core_cells=8, outer_factor=20.0))


@pytest.fixture(scope='module')
def single_charge(coarse_config):
    return solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0])], BETA, coarse_config)


@pytest.fixture(scope='module')
def dipole(coarse_config):
    charges = [PointCharge(z=1, position=[0.0, 0.0, 0.0], kappa=0.0),
               PointCharge(z=-1, position=[0.0, 0.0, 5.0])]
    return solve_electrostatic(charges, BETA, coarse_config)


def _born_error(sol):
    nodes = sol.mesh.nodes
    exact = defect_potential(np.hypot(nodes[:, 0], nodes[:, 1]), BETA, 1)
    return np.max(np.abs(sol.potential - exact)) / np.max(np.abs(exact))


@pytest.mark.parametrize('core_cells', [4, 8, 16])
def test_single_charge_is_exact_at_every_resolution(core_cells):
    config = SolverConfig(grid=GridConfig(core_cells=core_cells, outer_factor=20.0))
    sol = solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0])], BETA, config)
    assert np.max(np.abs(sol.stream)) < 1e-10
    assert _born_error(sol) < 1e-10
    assert evaluate_A1(sol, 0) == pytest.approx(born_central_value(BETA), rel=1e-10)


def test_single_charge_respects_lipschitz_bound(single_charge):
    assert single_charge.max_scaled_gradient < 1.0
    assert single_charge.residual_history[-1] <= single_charge.residual_history[0]
    assert 0.0 < single_charge.lipschitz_margin <= 1.0


def test_single_charge_energy_is_rest_energy_plus_one():
    alpha = 0.3
    config = SolverConfig(grid=GridConfig(core_cells=8, outer_factor=20.0))
    sol = solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0])], BETA, config)
    expected = 1.0 + born_field_energy(alpha, BETA)
    assert energy_of_static_solution(sol, alpha) == pytest.approx(expected, rel=1e-3)


def test_gauss_flux_recovers_charge(single_charge, dipole):
    assert charge_flux(single_charge, 5.0) == pytest.approx(1.0, abs=1e-6)
    assert charge_flux(dipole, 20.0, center_zeta=2.5) == pytest.approx(0.0, abs=1e-6)
    # a sphere around the nucleus only
    assert charge_flux(dipole, 2.0, center_zeta=0.0) == pytest.approx(1.0, abs=1e-6)


def test_flux_sphere_must_fit_in_domain(single_charge):
    with pytest.raises(UsageError):
        charge_flux(single_charge, 10.0 * single_charge.mesh.radius)
    with pytest.raises(UsageError):
        charge_flux(single_charge, -1.0)


def test_potential_at_matches_nodes(dipole):
    point = np.array([[0.0, 1.5, 2.5]])
    value = potential_at(dipole, point)[0]
    # antisymmetric dipole: the mid-plane potential is zero
    assert value == pytest.approx(0.0, abs=5e-3)
    with pytest.raises(UsageError):
        potential_at(dipole, np.array([[1e6, 0.0, 0.0]]))


def test_a1_is_translation_invariant(coarse_config, dipole):
    shift = np.array([3.0, -1.0, 7.0])
    charges = [PointCharge(z=1, position=shift, kappa=0.0),
               PointCharge(z=-1, position=shift + [0.0, 0.0, 5.0])]
    moved = solve_electrostatic(charges, BETA, coarse_config)
    for k in range(2):
        assert evaluate_A1(moved, k) == pytest.approx(evaluate_A1(dipole, k), rel=1e-9)


def test_close_pair_follows_the_linear_law(coarse_config):
    # the field between a close pair is saturated, so A drops by about s across it
    value = solve_a1(0.1 * BETA, BETA, coarse_config)
    assert value == pytest.approx(-0.1 / (2.0 * BETA ** 2), rel=1e-2)


def test_a1_index_out_of_range(dipole):
    with pytest.raises(UsageError):
        evaluate_A1(dipole, 2)


def test_convexity_identity(dipole):
    assert convexity_uniqueness_check(dipole, dipole) == 0.0

    def bump(rho, zeta):
        return 1e-3 * np.maximum(0.0, 1.0 - (rho - 2.0) ** 2 - (zeta - 2.5) ** 2) ** 2

    perturbed = perturb_solution(dipole, bump)
    assert convexity_uniqueness_check(dipole, perturbed) > 0.0
    q = dipole.mesh.quadrature
    far = (q.rho - 2.0) ** 2 + (q.zeta - 2.5) ** 2 > 4.0
    np.testing.assert_array_equal(perturbed.displacement[far], dipole.displacement[far])


def test_zero_perturbation_keeps_saturated_displacement(single_charge):
    assert single_charge.lipschitz_margin < 1e-3
    same = perturb_solution(single_charge, lambda rho, zeta: np.zeros_like(rho))
    np.testing.assert_array_equal(same.displacement, single_charge.displacement)
    assert convexity_uniqueness_check(single_charge, same) == 0.0


def test_perturbation_beyond_lipschitz_bound_is_rejected(dipole):
    def steep(rho, zeta):
        return 50.0 * np.maximum(0.0, 1.0 - (rho - 2.0) ** 2 - (zeta - 2.5) ** 2) ** 2

    with pytest.raises(LipschitzBoundError):
        perturb_solution(dipole, steep)


def test_two_initial_guesses_reach_the_same_solution():
    config = SolverConfig(grid=GridConfig(core_cells=6, outer_factor=20.0), tolerance=1e-5)
    charges = [PointCharge(z=1, position=[0.0, 0.0, 0.0]), PointCharge(z=-1, position=[0.0, 0.0, 3.0])]
    from_zero = solve_electrostatic(charges, BETA, config)
    nodes = from_zero.mesh.nodes
    guess = 0.2 * nodes[:, 0] ** 2 * np.exp(-0.25 * (nodes[:, 0] ** 2 + (nodes[:, 1] - 1.5) ** 2))
    from_guess = solve_electrostatic(charges, BETA, config, initial_stream=guess)
    assert from_guess.iterations > 0
    assert convexity_uniqueness_check(from_zero, from_guess) < config.tolerance ** 2
    with pytest.raises(UsageError):
        solve_electrostatic(charges, BETA, config, initial_stream=guess[:-1])


def test_dipole_is_antisymmetric(coarse_config, dipole):
    mesh = dipole.mesh
    np.testing.assert_allclose(mesh.zeta[::-1], 5.0 - mesh.zeta, atol=1e-12)
    A = dipole.potential.reshape(mesh.shape)
    scale = np.max(np.abs(A))
    # mirror through the mid-plane exchanges the charges
    assert np.max(np.abs(A + A[:, ::-1])) < 1e-6 * scale

    flipped = solve_electrostatic([PointCharge(z=-1, position=[0.0, 0.0, 0.0]),
                                   PointCharge(z=1, position=[0.0, 0.0, 5.0])], BETA, coarse_config)
    assert np.max(np.abs(flipped.potential + dipole.potential)) < 1e-12 * scale
    assert evaluate_A1(flipped, 0) == pytest.approx(-evaluate_A1(dipole, 0), rel=1e-12)


def test_convexity_needs_shared_data(single_charge, dipole):
    with pytest.raises(UsageError):
        convexity_uniqueness_check(single_charge, dipole)


def test_charges_must_be_collinear_and_distinct(coarse_config):
    with pytest.raises(UnsupportedGeometryError) as info:
        solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0]),
                             PointCharge(z=-1, position=[0.0, 0.0, 1.0]),
                             PointCharge(z=1, position=[1.0, 0.0, 0.0])], BETA, coarse_config)
    assert info.value.exit_code == 2
    with pytest.raises(UsageError):
        solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0]),
                             PointCharge(z=-1, position=[0.0, 0.0, 0.0])], BETA, coarse_config)


def test_point_charge_validation():
    with pytest.raises(UsageError):
        PointCharge(z=0, position=[0.0, 0.0, 0.0])
    with pytest.raises(UsageError):
        PointCharge(z=1, position=[0.0, 0.0, 0.0], kappa=2.0)


def test_newton_iteration_limit_raises():
    config = SolverConfig(grid=GridConfig(core_cells=4, outer_factor=10.0), max_iterations=1)
    with pytest.raises(SolverConvergenceError) as info:
        solve_electrostatic(electron_nucleus_pair(3.0), BETA, config)
    assert len(info.value.residual_history) == 1


def test_solution_table_columns(dipole):
    table = solution_table(dipole)
    assert list(table.columns) == ['rho', 'zeta', 'A', 'grad_A', 'residual']
    assert len(table) == dipole.mesh.num_nodes


@pytest.mark.slow
def test_single_charge_error_at_default_resolution():
    sol = solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0])], BETA)
    assert _born_error(sol) < 1e-10


@pytest.mark.slow
def test_dipole_value_converges_under_refinement():
    charges = [PointCharge(z=1, position=[0.0, 0.0, 0.0]), PointCharge(z=-1, position=[0.0, 0.0, 2.0])]
    values = [evaluate_A1(solve_electrostatic(charges, BETA,
                                              SolverConfig(grid=GridConfig(core_cells=n, outer_factor=20.0))), 1)
              for n in (4, 8, 16)]
    assert abs(values[2] - values[1]) < abs(values[1] - values[0])
    assert abs(values[2] - values[1]) < 1e-2 * abs(values[2])


@pytest.mark.slow
def test_a1_far_field_asymptotics():
    self_value = born_central_value(BETA, sign=-1)
    scaled = []
    for separation in (20.0, 40.0, 80.0):
        a1 = solve_a1(separation * BETA, BETA)
        scaled.append(abs(a1 - (self_value + 1.0 / separation)) * separation ** 2 / BETA)
    assert np.all(np.isfinite(scaled))
    assert max(scaled) < 10.0


@pytest.mark.slow
def test_a1_small_separation_slope():
    separations = np.array([0.05, 0.1]) * BETA
    values = np.array([solve_a1(s, BETA) for s in separations])
    slope = np.polyfit(separations, values, 1)[0]
    assert slope == pytest.approx(-1.0 / (2.0 * BETA ** 2), rel=0.05)
