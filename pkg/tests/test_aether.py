"""Tests for the pointwise Born-Infeld constitutive laws"""

import numpy as np
import pytest

from physics.aether import (
    BDState,
    EBState,
    electrostatic_pair,
    energy_density,
    fields_from_state,
    forward_radicand,
    maxwell_fields_from_state,
    state_from_fields,
    static_field_from_displacement,
    ultra_fields_from_state,
)
from physics.errors import InadmissibleStateError, LipschitzBoundError


def _plane_wave_samples(rng, n, scale):
    """Pairs with |B| = |D| and B . D = 0"""
    B = rng.normal(size=(n, 3)) * scale
    other = rng.normal(size=(n, 3))
    D = np.cross(B, other)
    D *= (np.linalg.norm(B, axis=1) / np.linalg.norm(D, axis=1))[:, None]
    return B, D


def test_forward_radicand_at_least_one(rng):
    B = rng.normal(size=(100, 3))
    D = rng.normal(size=(100, 3))
    assert np.all(forward_radicand(B, D, 0.7) >= 1.0)


def test_plane_wave_pass_through(rng):
    beta = 0.8
    B, D = _plane_wave_samples(rng, 1000, 3.0)
    f = fields_from_state(BDState(B=B, D=D), beta)
    assert np.max(np.abs(f.E - D)) < 1e-12 * max(1.0, np.max(np.abs(D)))
    assert np.max(np.abs(f.H - B)) < 1e-12 * max(1.0, np.max(np.abs(B)))


def test_zero_beta_is_maxwell(rng):
    B = rng.normal(size=(50, 3))
    D = rng.normal(size=(50, 3))
    f = fields_from_state(BDState(B=B, D=D), 0.0)
    m = maxwell_fields_from_state(BDState(B=B, D=D))
    np.testing.assert_array_equal(f.E, D)
    np.testing.assert_array_equal(f.H, B)
    np.testing.assert_array_equal(m.E, D)


def test_constitutive_round_trip(rng):
    beta = 1.3
    n = 10000
    directions = rng.normal(size=(2, n, 3))
    directions /= np.linalg.norm(directions, axis=2, keepdims=True)
    B = directions[0] * rng.uniform(0.0, 2.0, size=(n, 1)) / beta ** 2
    D = directions[1] * rng.uniform(0.0, 2.0, size=(n, 1)) / beta ** 2
    f = fields_from_state(BDState(B=B, D=D), beta)
    back = state_from_fields(f, beta)
    scale = np.maximum(np.linalg.norm(B, axis=1), np.linalg.norm(D, axis=1))
    scale = np.maximum(scale, 1e-300)
    err_b = np.linalg.norm(back.B - B, axis=1) / scale
    err_d = np.linalg.norm(back.D - D, axis=1) / scale
    assert np.max(err_b) < 1e-10
    assert np.max(err_d) < 1e-10


def test_inverse_recovers_strong_crossed_fields():
    # |B| = |D| = d perpendicular gives E = d y, H = d x and S = 1 - d**2 < 0 for d > 1
    beta = 1.0
    B = np.array([[1.7, 0.0, 0.0], [-0.786, 0.480, -0.252]])
    D = np.array([[0.0, 1.7, 0.0], [0.3, 0.9, 0.8]])
    f = fields_from_state(BDState(B=B, D=D), beta)
    assert beta ** 4 * np.sum(f.E[0] ** 2) > 1.0
    back = state_from_fields(f, beta)
    np.testing.assert_allclose(back.B, B, rtol=1e-12, atol=1e-12)
    np.testing.assert_allclose(back.D, D, rtol=1e-12, atol=1e-12)


def test_field_strengths_are_bounded(rng):
    beta = 0.5
    D = rng.normal(size=(200, 3)) * 1e6
    f = fields_from_state(BDState(B=np.zeros((200, 3)), D=D), beta)
    assert np.all(beta ** 2 * np.linalg.norm(f.E, axis=1) < 1.0)


def test_inverse_rejects_inadmissible_sample():
    beta = 1.0
    E = np.array([[0.1, 0.0, 0.0], [2.0, 0.0, 0.0]])
    with pytest.raises(InadmissibleStateError) as info:
        state_from_fields(EBState(E=E, H=np.zeros((2, 3))), beta)
    assert info.value.radicand == pytest.approx(-3.0)
    assert info.value.e_norm == pytest.approx(2.0)


def test_ultra_law_vanishes_for_parallel_fields():
    B = np.array([[1.0, 2.0, 3.0], [0.0, 0.0, 0.0]])
    D = np.array([[2.0, 4.0, 6.0], [1.0, 0.0, 0.0]])
    f = ultra_fields_from_state(BDState(B=B, D=D))
    assert np.all(f.E == 0.0)
    assert np.all(f.H == 0.0)


def test_ultra_law_is_large_beta_limit(rng):
    B = rng.normal(size=(20, 3))
    D = rng.normal(size=(20, 3))
    ultra = ultra_fields_from_state(BDState(B=B, D=D))
    f = fields_from_state(BDState(B=B, D=D), 1e3)
    np.testing.assert_allclose(f.E, ultra.E, rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(f.H, ultra.H, rtol=1e-6, atol=1e-8)


def test_electrostatic_pair_and_static_forward_law(rng):
    beta = 0.9
    D = rng.normal(size=(300, 3)) * 5.0
    E = static_field_from_displacement(D, beta)
    E2, D2 = electrostatic_pair(-E, beta)
    np.testing.assert_allclose(E2, E, rtol=0, atol=0)
    np.testing.assert_allclose(D2, D, rtol=1e-10)


def test_electrostatic_pair_enforces_lipschitz_bound():
    beta = 1.0
    with pytest.raises(LipschitzBoundError) as info:
        electrostatic_pair(np.array([[0.5, 0.0, 0.0], [1.0, 0.0, 0.0]]), beta)
    assert info.value.scaled_gradient == pytest.approx(1.0)


def test_energy_density_weak_field_limit():
    B = np.array([1e-6, 0.0, 0.0])
    D = np.array([0.0, 2e-6, 0.0])
    alpha = 0.01
    value = energy_density(B, D, alpha, beta=1.0)
    assert value == pytest.approx(alpha / (8.0 * np.pi) * 5e-12, rel=1e-10)
    assert energy_density(np.zeros(3), np.zeros(3), alpha, 1.0) == 0.0
