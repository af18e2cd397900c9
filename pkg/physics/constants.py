"""
Dimensionless units and the universal constants alpha and beta.

Lengths are measured in reduced Compton wavelengths of the electron, times in
lambda_C / c, field strengths in e / lambda_C**2 and energies in m_e c**2.
"""

from dataclasses import dataclass
from typing import Dict

from scipy import constants as sc
from scipy import special

from physics.errors import DomainError


def euler_beta(p: float, q: float) -> float:
    """
    Euler's Beta function B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q).

    Args:
        p (float): First argument, must be positive
        q (float): Second argument, must be positive

    Returns:
        float: B(p, q)
    """
    if not (p > 0 and q > 0):
        raise DomainError(f"euler_beta requires positive arguments, got p={p}, q={q}")
    return float(special.beta(p, q))


def born_ratio() -> float:
    """beta / alpha for Born's determination, B(1/4, 1/4) / 6 (about 1.2361)."""
    return euler_beta(0.25, 0.25) / 6.0


def born_beta(alpha: float) -> float:
    """
    Born's aether constant for a given fine structure constant.

    Chosen so that the field energy of the electrostatic point-charge solution
    equals the electron rest energy.

    Args:
        alpha (float): Fine structure constant (alpha = 0 returns 0)

    Returns:
        float: beta = B(1/4, 1/4) alpha / 6
    """
    if alpha < 0:
        raise DomainError(f"born_beta requires alpha >= 0, got {alpha}")
    return born_ratio() * alpha


@dataclass(frozen=True)
class UniversalConstants:
    """The pair (alpha, beta) characterising one run."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha}")
        if not self.beta > 0:
            raise DomainError(f"beta must be positive, got {self.beta}")

    @classmethod
    def born(cls, alpha: float) -> "UniversalConstants":
        return cls(alpha=alpha, beta=born_beta(alpha))

    @property
    def beta_over_alpha(self) -> float:
        return self.beta / self.alpha


def dimensional_scales() -> Dict[str, float]:
    """
    SI values of the dimensionless units, for report headers.

    Returns:
        Dict[str, float]: length (m), time (s), field (V/m) and energy (eV) units
    """
    electron_mass = sc.m_e
    length = sc.hbar / (electron_mass * sc.c)
    field = sc.e / (4.0 * sc.pi * sc.epsilon_0 * length ** 2)
    return {
        'length_m': length,
        'time_s': length / sc.c,
        'field_V_per_m': field,
        'energy_eV': electron_mass * sc.c ** 2 / sc.e,
        'alpha_codata': sc.fine_structure,
    }
