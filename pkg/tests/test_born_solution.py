"""Tests for Born's point-charge solution"""

import numpy as np
import pytest
from scipy import integrate

from electrostatics.born import (
    born_central_value,
    born_core_energy,
    born_field,
    born_field_energy,
    born_potential,
    coulomb_displacement,
    defect_field,
    defect_potential,
)
from physics.aether import static_field_from_displacement
from physics.errors import DomainError


def test_central_value_with_born_beta(alpha, beta):
    assert alpha * abs(born_central_value(beta)) == pytest.approx(1.5, abs=1e-6)
    assert alpha * abs(born_potential(0.0, beta, sign=-1)) == pytest.approx(1.5, abs=1e-6)


def test_potential_at_origin_matches_central_value():
    beta = 0.37
    assert born_potential(0.0, beta) == pytest.approx(born_central_value(beta), rel=1e-14)
    assert born_potential(0.0, beta, sign=-1) == pytest.approx(born_central_value(beta, sign=-1), rel=1e-14)


@pytest.mark.parametrize('r', [0.01, 0.3, 1.0, 2.5, 40.0])
def test_potential_matches_direct_quadrature(r):
    beta = 0.8
    value, _ = integrate.quad(lambda x: 1.0 / np.sqrt(1.0 + x ** 4), r / beta, np.inf, epsabs=0, epsrel=1e-13)
    assert born_potential(r, beta) == pytest.approx(value / beta, rel=1e-10)


def test_potential_is_coulomb_far_away():
    beta = 1.0
    r = np.array([1e3, 1e4, 1e5])
    np.testing.assert_allclose(born_potential(r, beta), 1.0 / r, rtol=1e-12)


def test_potential_is_monotone_and_vectorized():
    r = np.linspace(0.0, 10.0, 200)
    values = born_potential(r, 0.5)
    assert values.shape == r.shape
    assert np.all(np.diff(values) < 0)


def test_rest_energy_closed_form(alpha, beta):
    assert born_field_energy(alpha, beta) == pytest.approx(1.0, abs=1e-6)


def test_rest_energy_quadrature_agrees(alpha, beta):
    closed = born_field_energy(alpha, beta, method='closed')
    quadrature = born_field_energy(alpha, beta, method='quadrature')
    assert quadrature == pytest.approx(closed, abs=1e-4)


def test_core_energy_increases_to_total(alpha, beta):
    radii = beta * np.array([0.5, 1.0, 5.0, 50.0])
    energies = [born_core_energy(r, alpha, beta) for r in radii]
    assert all(a < b for a, b in zip(energies, energies[1:]))
    assert energies[-1] < born_field_energy(alpha, beta)
    # the tail beyond R carries about alpha / (2 R) of Coulomb energy
    assert born_field_energy(alpha, beta) - energies[-1] == pytest.approx(alpha / (2 * radii[-1]), rel=1e-3)


def test_core_energy_scales_with_charge(alpha, beta):
    single = born_core_energy(np.inf, alpha, beta, charge=1)
    double = born_core_energy(np.inf, alpha, beta, charge=2)
    assert double == pytest.approx(2 ** 1.5 * single, rel=1e-10)


def test_field_is_static_law_of_coulomb_displacement(rng):
    beta = 0.6
    points = rng.normal(size=(100, 3))
    center = np.array([0.1, -0.2, 0.3])
    E = born_field(points, center, beta)
    D = coulomb_displacement(points, center)
    np.testing.assert_allclose(E, static_field_from_displacement(D, beta), rtol=1e-12)


def test_field_vanishes_at_the_charge():
    E = born_field(np.zeros((1, 3)), np.zeros(3), 1.0)
    assert np.all(E == 0.0)


def test_defect_of_charge_z():
    beta = 0.5
    r = np.array([0.0, 0.2, 3.0])
    np.testing.assert_allclose(defect_potential(r, beta, 2), 2 * born_potential(r, np.sqrt(2) * beta))
    np.testing.assert_allclose(defect_potential(r, beta, -1), born_potential(r, beta, sign=-1))
    points = np.array([[0.0, 0.0, 1.0]])
    E = defect_field(points, np.zeros(3), beta, -2)
    assert E[0, 2] == pytest.approx(-2.0 / np.sqrt(1.0 + 4.0 * beta ** 4), rel=1e-14)


def test_invalid_arguments():
    with pytest.raises(DomainError):
        born_potential(1.0, 0.0)
    with pytest.raises(DomainError):
        born_potential(-1.0, 1.0)
    with pytest.raises(DomainError):
        born_potential(1.0, 1.0, sign=2)
    with pytest.raises(DomainError):
        born_field_energy(1.0, 1.0, method='simpson')
