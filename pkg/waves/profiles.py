"""
Pulse profiles and exact traveling solutions on a periodic line.

A transverse field B(z - d t) with D = d * (B x z_hat) is an exact solution
of the source-free Born-Infeld equations for either direction d = +1 / -1:
|B| = |D| and B . D = 0 make the constitutive law act as the identity.
For x-polarisation the right-moving member is B = p e_x, D = -p e_y and the
left-moving one is B = p e_x, D = +p e_y.
"""

from dataclasses import dataclass

import numpy as np

from physics.errors import ConfigurationError

SHAPES = ('gaussian', 'sech', 'bump', 'cosine')
POLARIZATIONS = ('x', 'y', 'circular')


@dataclass(frozen=True)
class PulseProfile:
    """
    Profile p(xi) and its embedding as a transverse traveling wave.

    ``width`` is the Gaussian/sech scale or the bump half-width; ``wavenumber``
    applies to cosine and circular profiles, which are periodic. Circular
    profiles are envelope * a (cos k xi, sin k xi) with the envelope given by
    ``shape`` ('cosine' means no envelope).
    """

    shape: str = 'gaussian'
    center: float = 0.0
    width: float = 1.0
    amplitude: float = 1.0
    direction: int = 1
    polarization: str = 'x'
    wavenumber: float = 0.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ConfigurationError(f"unknown pulse shape '{self.shape}'", path='pulse.shape')
        if self.polarization not in POLARIZATIONS:
            raise ConfigurationError(f"unknown polarization '{self.polarization}'", path='pulse.polarization')
        if self.direction not in (1, -1):
            raise ConfigurationError("direction must be +1 or -1", path='pulse.direction')
        if not self.width > 0:
            raise ConfigurationError("width must be positive", path='pulse.width')

    def envelope(self, xi: np.ndarray, length: float) -> np.ndarray:
        """Envelope at periodic distance from the centre."""
        d = np.mod(xi - self.center + 0.5 * length, length) - 0.5 * length
        if self.shape == 'gaussian':
            return np.exp(-(d / self.width) ** 2)
        if self.shape == 'sech':
            return 1.0 / np.cosh(d / self.width)
        if self.shape == 'bump':
            x = np.clip(d / self.width, -1.0, 1.0)
            inside = np.abs(x) < 1.0
            out = np.zeros_like(x)
            out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
            return out
        return np.ones_like(d)

    def carrier(self, xi: np.ndarray):
        if self.shape == 'cosine' or self.polarization == 'circular' or self.wavenumber != 0.0:
            phase = self.wavenumber * (xi - self.center)
            return np.cos(phase), np.sin(phase)
        return np.ones_like(xi), np.zeros_like(xi)

    def induction(self, xi: np.ndarray, length: float):
        """Transverse B components (Bx, By) at profile argument xi."""
        xi = np.asarray(xi, dtype=float)
        env = self.amplitude * self.envelope(xi, length)
        cos_part, sin_part = self.carrier(xi)
        if self.polarization == 'circular':
            return env * cos_part, env * sin_part
        p = env * cos_part
        if self.polarization == 'x':
            return p, np.zeros_like(p)
        return np.zeros_like(p), p


def traveling_components(profile: PulseProfile, z: np.ndarray, t: float, length: float):
    """(Bx, By, Dx, Dy) of the exact traveling solution at time t."""
    xi = z - profile.direction * t
    bx, by = profile.induction(xi, length)
    # D = d * (B x z_hat) = d * (By, -Bx)
    d = profile.direction
    return bx, by, d * by, -d * bx
