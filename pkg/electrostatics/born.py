"""
Born's electrostatic point-charge solution.

The potential (1/beta) * integral_{r/beta}^inf dx / sqrt(1 + x^4) is evaluated
through the incomplete elliptic integral of the first kind with parameter
m = 1/2, which has no cancellation near r = 0 or r -> infinity.
"""

import logging

import numpy as np
from scipy import integrate, special

from physics.constants import euler_beta
from physics.errors import DomainError

logger = logging.getLogger(__name__)


def _check_beta(beta: float):
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")


def born_potential(r, beta: float, sign: int = 1):
    """
    Potential of Born's solution at distance r from the charge.

    Args:
        r: Distance(s) from the charge, non-negative
        beta (float): Aether constant
        sign (int): +1 or -1, the sign of the charge

    Returns:
        float or np.ndarray: sign * (1/beta) * integral_{r/beta}^inf dx/sqrt(1+x^4)
    """
    _check_beta(beta)
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("born_potential requires r >= 0")
    # integral_x^inf dx/sqrt(1+x^4) = F(phi | 1/2) / 2 with phi = 2 arctan(1/x)
    phi = 2.0 * np.arctan2(beta, r)
    value = sign * 0.5 * special.ellipkinc(phi, 0.5) / beta
    return float(value) if value.ndim == 0 else value


def born_central_value(beta: float, sign: int = 1) -> float:
    """Finite value at the charge, sign * B(1/4, 1/4) / (4 beta)."""
    _check_beta(beta)
    return sign * euler_beta(0.25, 0.25) / (4.0 * beta)


def born_field_magnitude(r, beta: float):
    """|E| of Born's solution, 1 / sqrt(beta^4 + r^4)."""
    r = np.asarray(r, dtype=float)
    return 1.0 / np.sqrt(beta ** 4 + r ** 4)


def born_field(points, center, beta: float, charge: float = 1.0):
    """
    Field strength E of Born's solution around a charge at ``center``.

    Points may have any trailing dimension (3 for space, 2 for the meridian
    plane). E vanishes at the charge itself by convention.
    """
    _check_beta(beta)
    rel = np.asarray(points, dtype=float) - np.asarray(center, dtype=float)
    r = np.sqrt(np.einsum('...i,...i->...', rel, rel))
    safe = np.where(r > 0, r, 1.0)
    scale = np.where(r > 0, charge / (safe * np.sqrt(beta ** 4 + safe ** 4)), 0.0)
    return rel * scale[..., None]


def defect_potential(r, beta: float, charge: int):
    """
    Born potential of a charge z, |z| * born_potential(r, sqrt|z| beta, sign z).

    The field of charge z is Born's field with core length sqrt(|z|) * beta.
    """
    strength = abs(charge)
    return strength * born_potential(r, np.sqrt(strength) * beta, 1 if charge > 0 else -1)


def defect_field(points, center, beta: float, charge: int):
    """Field strength z s_hat / sqrt(r^4 + z^2 beta^4) of a Born defect of charge z."""
    return born_field(points, center, np.sqrt(abs(charge)) * beta, charge=charge)


def coulomb_displacement(points, center, charge: float = 1.0):
    """Coulomb displacement z * s_hat / |s|^2; singular at the charge."""
    rel = np.asarray(points, dtype=float) - np.asarray(center, dtype=float)
    r = np.sqrt(np.einsum('...i,...i->...', rel, rel))
    return rel * (charge / r ** 3)[..., None]


def _reduced_density(x):
    # (sqrt(1 + x^-4) - 1) x^2 = sqrt(1 + x^4) - x^2, written without cancellation
    return 1.0 / (np.sqrt(1.0 + x ** 4) + x ** 2)


def born_core_energy(radius: float, alpha: float, beta: float, charge: float = 1.0) -> float:
    """
    Field energy of Born's solution inside a ball around the charge.

    Args:
        radius (float): Ball radius (np.inf for the full self-energy)
        alpha (float): Fine structure constant
        beta (float): Aether constant
        charge (float): Charge number z; the energy scales as |z|^(3/2)

    Returns:
        float: (alpha/beta^4) integral_0^radius (sqrt(1 + z^2 beta^4/r^4) - 1) r^2 dr
    """
    _check_beta(beta)
    strength = abs(charge)
    if strength == 0:
        return 0.0
    scale = np.sqrt(strength) * beta
    value, _ = integrate.quad(_reduced_density, 0.0, radius / scale, limit=200)
    return alpha * strength ** 1.5 * value / beta


def born_field_energy(alpha: float, beta: float, method: str = 'closed') -> float:
    """
    Total field energy of Born's solution, (alpha/beta) B(1/4, 1/4) / 6.

    Args:
        alpha (float): Fine structure constant
        beta (float): Aether constant
        method (str): 'closed' for the Beta-function form, 'quadrature' for
            radial quadrature of the energy density of the Coulomb displacement

    Returns:
        float: Field energy in units of the electron rest energy
    """
    _check_beta(beta)
    if method == 'closed':
        return alpha * euler_beta(0.25, 0.25) / (6.0 * beta)
    if method == 'quadrature':
        return born_core_energy(np.inf, alpha, beta)
    raise DomainError(f"unknown energy method '{method}'")
