"""Tests for the radial Hamilton-Jacobi guidance and the test-particle oracle"""

import numpy as np
import pytest

from guidance import (
    A1Profile,
    CoulombField,
    HJConfig,
    ParticleTrack,
    RadialHJState,
    UniformField,
    build_radial_state,
    circular_orbit_momentum,
    coulomb_energy,
    gauge_shift,
    guide,
    hj_evolve,
    kinetic,
    nucleus_infall_state,
    numerical_hamiltonian,
    reduction_comparison,
    static_electron_state,
    test_particle_oracle,
)
from physics.errors import ConfigurationError, DomainError, HamiltonJacobiBreakdown, UsageError

TOY_ALPHA = 0.2
TOY_BETA = 0.05


@pytest.fixture(scope='module')
def infall():
    """Electron released from rest at r = 1 around a Coulomb nucleus"""
    profile = A1Profile.coulomb(TOY_BETA)
    state = nucleus_infall_state(profile, 1.0, TOY_BETA, TOY_ALPHA)
    trajectory = hj_evolve(state, 1.5)
    start = np.array([0.0, 0.0, 1.0])
    return trajectory, guide(trajectory, start)


def test_kinetic_has_no_cancellation():
    p = np.array([0.5, 0.0, 3.0])
    np.testing.assert_allclose(kinetic(p), np.sqrt(1.0 + p ** 2) - 1.0, rtol=1e-6, atol=0.0)
    assert kinetic(np.array([1e-9]))[0] == pytest.approx(5e-19, rel=1e-12)


def test_numerical_hamiltonian_vanishes_on_constant_phase():
    assert np.all(numerical_hamiltonian(np.full(10, 3.7), 0.1) == 0.0)


def test_static_electron_keeps_its_phase(alpha, beta):
    state = static_electron_state(A1Profile.isolated(beta), beta, alpha)
    trajectory = hj_evolve(state, 1.0)
    for phi in trajectory.phis:
        np.testing.assert_array_equal(phi, state.Phi)
    for t in np.linspace(0.0, 1.0, 7):
        assert np.all(trajectory.velocity_at(t, state.r_grid) == 0.0)

    slope = -1.0 + alpha * float(state.A1[0])
    for k, t in enumerate(trajectory.times):
        assert trajectory.phase(k)[0] - state.Phi[0] == pytest.approx(slope * t, abs=1e-12)
    # the electron's own central value with Born's beta
    assert slope == pytest.approx(-2.5, abs=1e-6)


def test_static_electron_state_samples_the_given_profile():
    state = static_electron_state(lambda r: np.full(np.shape(r), -7.5), TOY_BETA, TOY_ALPHA, cells_per_beta=4)
    assert np.all(state.A1 == -7.5)
    assert state.r_min == TOY_BETA
    assert state.r_max == pytest.approx(10.0 * TOY_BETA)
    assert state.dr == pytest.approx(TOY_BETA / 4)
    frame = hj_evolve(state, 0.01).to_frame()
    assert list(frame.columns) == ['t', 'r', 'Phi', 'dPhi_dr', 'A1']


def test_static_electron_track_stays_put(alpha, beta):
    trajectory = hj_evolve(static_electron_state(A1Profile.isolated(beta), beta, alpha), 0.5)
    start = np.array([0.0, 3.0 * beta, 0.0])
    track = guide(trajectory, start)
    assert track.reason == 't_end'
    assert np.all(track.positions == start)


def test_gauge_shift_leaves_guidance_unchanged():
    profile = A1Profile.coulomb(TOY_BETA)
    state = nucleus_infall_state(profile, 1.0, TOY_BETA, TOY_ALPHA)
    c = 17.25
    base = hj_evolve(state, 0.3)
    shifted = hj_evolve(gauge_shift(state, c), 0.3)
    r = np.linspace(0.2, 2.5, 50)
    for k, t in enumerate(base.times):
        np.testing.assert_allclose(shifted.phis[k], base.phis[k], rtol=0, atol=1e-12)
        np.testing.assert_allclose(shifted.velocity_at(t, r), base.velocity_at(t, r), rtol=0, atol=1e-12)
        assert shifted.phase(k)[0] - base.phase(k)[0] == pytest.approx(TOY_ALPHA * c * t, abs=1e-9)


def test_infall_is_monotone_and_subluminal(infall):
    _, track = infall
    assert track.reason == 't_end'
    assert np.all(np.diff(track.radii) <= 0.0)
    assert track.radii[-1] < 1.0
    assert np.all(track.speeds < 1.0)
    # purely radial motion along the starting axis
    assert np.all(track.positions[:, :2] == 0.0)


def test_infall_agrees_with_oracle(infall):
    trajectory, track = infall
    oracle = test_particle_oracle([0.0, 0.0, 1.0], np.zeros(3), CoulombField(), TOY_ALPHA, 1.5, 0.01)
    report = reduction_comparison(track, oracle, r_window=0.5)
    assert report.within(1e-2)
    assert report.samples > 10


def test_phase_export_frame(infall):
    trajectory, _ = infall
    frame = trajectory.to_frame()
    assert list(frame.columns) == ['t', 'r', 'Phi', 'dPhi_dr', 'A1']
    assert len(frame) == len(trajectory.times) * trajectory.r_grid.size


def test_track_ends_at_inner_radius():
    profile = A1Profile.coulomb(TOY_BETA)
    state = nucleus_infall_state(profile, 0.1, TOY_BETA, TOY_ALPHA, outer_factor=3.0)
    trajectory = hj_evolve(state, 2.0, HJConfig(snapshot_every=5))
    track = guide(trajectory, [0.0, 0.0, 0.1])
    assert track.reason == 'infall'
    assert track.radii[-1] <= trajectory.r_min


def test_cfl_above_one_is_rejected():
    state = static_electron_state(A1Profile.isolated(TOY_BETA), TOY_BETA, TOY_ALPHA)
    with pytest.raises(ConfigurationError):
        hj_evolve(state, 1.0, HJConfig(cfl=1.2))


def test_breakdown_reports_diagnostics():
    state = build_radial_state(A1Profile.coulomb(TOY_BETA), TOY_BETA, 1.0, 0.01, TOY_ALPHA)
    with pytest.raises(HamiltonJacobiBreakdown) as info:
        hj_evolve(state, 0.5, HJConfig(gradient_cap=1e-3))
    assert info.value.diagnostics['step'] == 1
    assert info.value.last_good.time == 0.0


def test_start_outside_grid_is_rejected():
    trajectory = hj_evolve(static_electron_state(A1Profile.isolated(TOY_BETA), TOY_BETA, TOY_ALPHA), 0.1)
    with pytest.raises(UsageError):
        guide(trajectory, [0.0, 0.0, 100.0])
    with pytest.raises(UsageError):
        guide(trajectory, [0.0, 0.0, 0.0])
    with pytest.raises(UsageError):
        guide(trajectory, [1.0, 2.0])


def test_non_uniform_grid_is_rejected():
    with pytest.raises(ConfigurationError):
        RadialHJState(r_grid=[0.1, 0.2, 0.4], Phi=np.zeros(3), A1=np.zeros(3))


def test_a1_profile_modes(beta):
    isolated = A1Profile.isolated(beta)
    coulomb = A1Profile.coulomb(beta)
    r = np.array([beta, 10.0 * beta])
    np.testing.assert_allclose(isolated(r), isolated.self_value)
    np.testing.assert_allclose(coulomb(r), isolated.self_value + 1.0 / r)
    with pytest.raises(DomainError):
        coulomb(np.array([0.0]))
    with pytest.raises(ConfigurationError):
        A1Profile(beta=beta, mode='screened')


def test_tabulated_profile_extensions():
    beta = 1.0
    self_value = A1Profile.isolated(beta).self_value
    separations = np.array([1.0, 2.0, 4.0])
    values = self_value + 1.0 / separations + np.array([0.3, 0.1, 0.02])
    profile = A1Profile(beta=beta, mode='tabulated', separations=separations, values=values)
    np.testing.assert_allclose(profile(separations), values, rtol=1e-14)
    # linear through zero below the first sample
    assert profile(np.array([0.5]))[0] == pytest.approx(0.5 * values[0])
    # Coulomb plus a decaying correction above the last one
    assert profile(np.array([8.0]))[0] == pytest.approx(self_value + 1.0 / 8.0 + 0.02 / 4.0)
    with pytest.raises(ConfigurationError):
        A1Profile(beta=beta, mode='tabulated', separations=[1.0], values=[0.0])


def test_oracle_free_motion_is_straight():
    p0 = np.array([0.3, 0.0, 0.4])
    track = test_particle_oracle([1.0, 0.0, 0.0], p0, UniformField(), 0.1, 2.0, 0.1)
    v = p0 / np.sqrt(1.0 + p0 @ p0)
    np.testing.assert_allclose(track.positions[-1], [1.0, 0.0, 0.0] + 2.0 * v, rtol=1e-13)
    np.testing.assert_allclose(track.momenta[-1], p0)


def test_oracle_conserves_coulomb_energy():
    p0 = np.array([0.0, 0.35, 0.0])
    track = test_particle_oracle([1.0, 0.0, 0.0], p0, CoulombField(), TOY_ALPHA, 20.0, 0.005)
    energy = coulomb_energy(track, TOY_ALPHA)
    assert np.max(np.abs(energy - energy[0])) < 1e-7


def test_oracle_circular_orbit_keeps_radius():
    radius = 1.0
    p = circular_orbit_momentum(radius, TOY_ALPHA)
    track = test_particle_oracle([radius, 0.0, 0.0], [0.0, p, 0.0], CoulombField(), TOY_ALPHA, 10.0, 0.005)
    np.testing.assert_allclose(track.radii, radius, rtol=1e-8)


def test_oracle_magnetic_field_conserves_speed():
    B = UniformField(magnetic=[0.0, 0.0, 2.0])
    track = test_particle_oracle([0.0, 0.0, 0.0], [0.5, 0.0, 0.0], B, 1.0, 5.0, 0.001)
    np.testing.assert_allclose(np.linalg.norm(track.momenta, axis=1), 0.5, rtol=1e-9)


def test_oracle_rejects_bad_steps():
    with pytest.raises(ConfigurationError):
        test_particle_oracle([1.0, 0.0, 0.0], np.zeros(3), CoulombField(), 0.1, 1.0, 0.0)
    with pytest.raises(ConfigurationError):
        test_particle_oracle([1.0, 0.0, 0.0], np.zeros(3), CoulombField(), 0.1, -1.0, 0.1)


def test_field_sum_adds_parts():
    total = CoulombField() + UniformField(electric=[1.0, 0.0, 0.0])
    s = np.array([2.0, 0.0, 0.0])
    np.testing.assert_allclose(total.E(s), [1.25, 0.0, 0.0])
    assert total.potential(s) == pytest.approx(0.5 - 2.0)


def test_track_rejects_superluminal_samples():
    with pytest.raises(DomainError):
        ParticleTrack(times=[0.0], positions=[[1.0, 0.0, 0.0]], velocities=[[1.0, 0.0, 0.0]])


def test_reduction_comparison_identity_and_mismatch():
    oracle = test_particle_oracle([0.0, 0.0, 1.0], np.zeros(3), CoulombField(), TOY_ALPHA, 1.0, 0.05)
    report = reduction_comparison(oracle, oracle, r_window=0.5)
    assert report.discrepancy == 0.0
    assert report.to_dict()['samples'] == report.samples

    other = test_particle_oracle([0.0, 0.0, 2.0], np.zeros(3), CoulombField(), TOY_ALPHA, 1.0, 0.05)
    with pytest.raises(UsageError):
        reduction_comparison(oracle, other, r_window=0.5)
    with pytest.raises(UsageError):
        reduction_comparison(oracle, oracle, r_window=5.0)


@pytest.mark.slow
def test_infall_from_fifty_born_radii_matches_oracle(alpha, beta):
    r0 = 50.0 * beta
    state = nucleus_infall_state(A1Profile.coulomb(beta), r0, beta, alpha, cells_per_beta=40)
    oracle = test_particle_oracle([0.0, 0.0, r0], np.zeros(3), CoulombField(), alpha, 10.0, 1e-3,
                                  r_stop=state.r_min)
    trajectory = hj_evolve(state, float(oracle.times[-1]))
    track = guide(trajectory, [0.0, 0.0, r0])
    report = reduction_comparison(track, oracle, r_window=10.0 * beta)
    assert report.within(1e-2)
