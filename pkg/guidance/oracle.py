"""
Relativistic test-particle oracle in prescribed external fields.

    dr/dt = p / sqrt(1 + |p|**2),    dp/dt = z alpha (E + dr/dt x B)

integrated with classical RK4 on the pair (r, p).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from config.settings import DEFAULT_ALPHA
from guidance.guiding import ParticleTrack
from physics.errors import ConfigurationError, UsageError

logger = logging.getLogger(__name__)


class ExternalField:
    """Static external (E, B) evaluated at a position."""

    def E(self, s: np.ndarray) -> np.ndarray:
        return np.zeros(3)

    def B(self, s: np.ndarray) -> np.ndarray:
        return np.zeros(3)

    def potential(self, s: np.ndarray) -> float:
        """Electric potential, when the field has one."""
        return 0.0

    def __add__(self, other: "ExternalField") -> "FieldSum":
        return FieldSum([self, other])


@dataclass
class CoulombField(ExternalField):
    """Field of a fixed point charge: E = charge (s - center) / |s - center|**3."""

    charge: float = 1.0
    center: Sequence[float] = (0.0, 0.0, 0.0)

    def E(self, s):
        d = np.asarray(s, dtype=float) - np.asarray(self.center, dtype=float)
        r = float(np.linalg.norm(d))
        return self.charge * d / r ** 3

    def potential(self, s):
        d = np.asarray(s, dtype=float) - np.asarray(self.center, dtype=float)
        return self.charge / float(np.linalg.norm(d))


@dataclass
class UniformField(ExternalField):
    electric: Sequence[float] = (0.0, 0.0, 0.0)
    magnetic: Sequence[float] = (0.0, 0.0, 0.0)

    def E(self, s):
        return np.asarray(self.electric, dtype=float)

    def B(self, s):
        return np.asarray(self.magnetic, dtype=float)

    def potential(self, s):
        return -float(np.dot(self.E(s), s))


@dataclass
class FieldSum(ExternalField):
    parts: list = field(default_factory=list)

    def E(self, s):
        return sum((p.E(s) for p in self.parts), np.zeros(3))

    def B(self, s):
        return sum((p.B(s) for p in self.parts), np.zeros(3))

    def potential(self, s):
        return math.fsum(p.potential(s) for p in self.parts)


def circular_orbit_momentum(radius: float, alpha: float = DEFAULT_ALPHA, charge: float = 1.0) -> float:
    """|p| balancing the Coulomb attraction: p**2 / sqrt(1 + p**2) = alpha charge / r."""
    c = alpha * charge / radius
    return math.sqrt(0.5 * (c * c + c * math.sqrt(c * c + 4.0)))


def coulomb_energy(track: ParticleTrack, alpha: float = DEFAULT_ALPHA, z: int = -1,
                   fields: Optional[ExternalField] = None) -> np.ndarray:
    """sqrt(1 + p**2) + z alpha phi_ext along an oracle track."""
    if track.momenta is None:
        raise UsageError("energy needs a track with momenta")
    fields = fields or CoulombField()
    kinetic = np.sqrt(1.0 + np.sum(track.momenta ** 2, axis=1))
    potential = np.array([fields.potential(s) for s in track.positions])
    return kinetic + z * alpha * potential


def _derivatives(s, p, fields: ExternalField, za: float):
    v = p / math.sqrt(1.0 + float(np.dot(p, p)))
    return v, za * (fields.E(s) + np.cross(v, fields.B(s)))


def test_particle_oracle(r0, p0, fields: ExternalField, alpha: float, t_end: float,
                         dt: float, z: int = -1, r_stop: Optional[float] = None) -> ParticleTrack:
    """
    Integrate the radiation-reaction-free Lorentz motion.

    Args:
        r0: Initial position
        p0: Initial momentum
        fields (ExternalField): External field descriptor
        alpha (float): Coupling
        t_end (float): Final time
        dt (float): Step
        z (int): Particle charge number
        r_stop (float): Stop when |r| falls to this radius ('infall')

    Returns:
        ParticleTrack: Positions, velocities and momenta
    """
    if not dt > 0:
        raise ConfigurationError("oracle step must be positive", path='dt')
    if t_end < 0:
        raise ConfigurationError("t_end must be non-negative", path='t_end')
    s = np.asarray(r0, dtype=float).copy()
    p = np.asarray(p0, dtype=float).copy()
    za = z * alpha
    t = 0.0
    times, positions, velocities, momenta = [t], [s.copy()], [], [p.copy()]
    velocities.append(p / math.sqrt(1.0 + float(np.dot(p, p))))
    reason = 't_end'
    while t_end - t > 1e-12 * max(1.0, t_end):
        h = min(dt, t_end - t)
        k1s, k1p = _derivatives(s, p, fields, za)
        k2s, k2p = _derivatives(s + 0.5 * h * k1s, p + 0.5 * h * k1p, fields, za)
        k3s, k3p = _derivatives(s + 0.5 * h * k2s, p + 0.5 * h * k2p, fields, za)
        k4s, k4p = _derivatives(s + h * k3s, p + h * k3p, fields, za)
        s = s + h / 6.0 * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
        p = p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        t = t_end if h == t_end - t else t + h
        times.append(t)
        positions.append(s.copy())
        momenta.append(p.copy())
        velocities.append(p / math.sqrt(1.0 + float(np.dot(p, p))))
        if r_stop is not None and float(np.linalg.norm(s)) <= r_stop:
            reason = 'infall'
            break
    logger.debug(f"Oracle track: {len(times)} samples, reason={reason}")
    return ParticleTrack(times=times, positions=positions, velocities=velocities,
                         reason=reason, momenta=np.array(momenta))


# keep pytest from collecting the oracle when it is imported into test modules
test_particle_oracle.__test__ = False
