"""Tests for the universal constants and Born's determination of beta"""

import math

import pytest

from physics.constants import (
    UniversalConstants,
    born_beta,
    born_ratio,
    dimensional_scales,
    euler_beta,
)
from physics.errors import DomainError


def test_euler_beta_known_values():
    assert euler_beta(1.0, 1.0) == pytest.approx(1.0, rel=1e-15)
    assert euler_beta(0.5, 0.5) == pytest.approx(math.pi, rel=1e-14)
    assert euler_beta(0.25, 0.25) == pytest.approx(math.gamma(0.25) ** 2 / math.gamma(0.5), rel=1e-14)


@pytest.mark.parametrize('p, q', [(0.0, 1.0), (1.0, -0.5), (-1.0, -1.0)])
def test_euler_beta_rejects_non_positive_arguments(p, q):
    with pytest.raises(DomainError):
        euler_beta(p, q)


def test_born_ratio_value():
    assert born_ratio() == pytest.approx(1.2361, abs=5e-4)


def test_born_beta_over_alpha(alpha):
    assert born_beta(alpha) / alpha == pytest.approx(1.2361, abs=5e-4)


def test_born_beta_is_linear_in_alpha():
    assert born_beta(0.0) == 0.0
    assert born_beta(2.0) == pytest.approx(2.0 * born_beta(1.0), rel=1e-15)


def test_born_beta_rejects_negative_alpha():
    with pytest.raises(DomainError):
        born_beta(-0.1)


def test_universal_constants_validation():
    with pytest.raises(DomainError):
        UniversalConstants(alpha=0.0, beta=1.0)
    with pytest.raises(DomainError):
        UniversalConstants(alpha=0.1, beta=-1.0)


def test_universal_constants_born(alpha):
    constants = UniversalConstants.born(alpha)
    assert constants.beta == born_beta(alpha)
    assert constants.beta_over_alpha == pytest.approx(born_ratio(), rel=1e-14)


def test_dimensional_scales_are_physical():
    scales = dimensional_scales()
    # reduced Compton wavelength and electron rest energy
    assert scales['length_m'] == pytest.approx(3.8616e-13, rel=1e-4)
    assert scales['energy_eV'] == pytest.approx(510998.95, rel=1e-6)
    assert 1.0 / scales['alpha_codata'] == pytest.approx(137.036, rel=1e-5)
