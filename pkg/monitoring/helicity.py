"""
Field helicities on a periodic line.

For transverse fields F(z) = (Fx, Fy, 0) the periodic vector potential in the
zero-mean gauge satisfies curl A_F = F, i.e. dAy/dz = -Fx and dAx/dz = Fy,
and is obtained spectrally. The helicity is (1/2) integral A_F . F dz per
unit cross-section.
"""

import math

import numpy as np

from physics.errors import DomainError

MEAN_TOLERANCE = 1e-12


def periodic_vector_potential(fx: np.ndarray, fy: np.ndarray, length: float):
    """
    Transverse vector potential of a periodic transverse field.

    Args:
        fx (np.ndarray): x-component samples on a uniform periodic grid
        fy (np.ndarray): y-component samples
        length (float): Period

    Returns:
        tuple: (Ax, Ay)

    Raises:
        DomainError: if the field has a nonzero mean (no periodic potential)
    """
    fx = np.asarray(fx, dtype=float)
    fy = np.asarray(fy, dtype=float)
    n = fx.size
    scale = max(float(np.max(np.abs(fx), initial=0.0)), float(np.max(np.abs(fy), initial=0.0)))
    mean = max(abs(math.fsum(fx)), abs(math.fsum(fy))) / n
    if mean > MEAN_TOLERANCE * max(scale, 1.0):
        raise DomainError(f"field has nonzero mean {mean:.3e}; no periodic vector potential")

    k = 2.0 * np.pi * np.fft.fftfreq(n, d=length / n)
    fx_hat = np.fft.fft(fx)
    fy_hat = np.fft.fft(fy)
    ax_hat = np.zeros_like(fx_hat)
    ay_hat = np.zeros_like(fy_hat)
    active = k != 0
    if n % 2 == 0:
        active[n // 2] = False
    ax_hat[active] = fy_hat[active] / (1j * k[active])
    ay_hat[active] = -fx_hat[active] / (1j * k[active])
    return np.fft.ifft(ax_hat).real, np.fft.ifft(ay_hat).real


def helicity_1d(fx: np.ndarray, fy: np.ndarray, length: float) -> float:
    """(1/2) integral A_F . F dz for a periodic transverse field."""
    ax, ay = periodic_vector_potential(fx, fy, length)
    dz = length / np.asarray(fx).size
    return 0.5 * dz * math.fsum(ax * fx + ay * fy)


def cross_helicity_1d(bx, by, dx, dy, length: float) -> float:
    """Electromagnetic cross-field helicity integral A_D . B dz."""
    ax, ay = periodic_vector_potential(dx, dy, length)
    dz = length / np.asarray(bx).size
    return dz * math.fsum(ax * np.asarray(bx) + ay * np.asarray(by))
