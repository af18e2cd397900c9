"""
Guiding-equation tracks along an evolving radial phase.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import pandas as pd

from guidance.hamilton_jacobi import HJTrajectory, validate_start
from physics.errors import DomainError, UsageError

logger = logging.getLogger(__name__)

REASONS = ('t_end', 'infall', 'left_domain')


@dataclass
class ParticleTrack:
    """Sampled positions and velocities; ``reason`` says why the track ended."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    reason: str = 't_end'
    momenta: Optional[np.ndarray] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.positions = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        self.velocities = np.asarray(self.velocities, dtype=float).reshape(-1, 3)
        if not len(self.times) == len(self.positions) == len(self.velocities):
            raise UsageError("track arrays must have matching lengths")
        if self.reason not in REASONS:
            raise UsageError(f"unknown track end reason '{self.reason}'")
        speeds = self.speeds
        if speeds.size and not np.all(speeds < 1.0):
            raise DomainError(f"superluminal track sample: max speed {float(np.max(speeds)):.16e}")

    @property
    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.positions, axis=1)

    @property
    def speeds(self) -> np.ndarray:
        return np.linalg.norm(self.velocities, axis=1)

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame({
            't': self.times,
            'x': self.positions[:, 0], 'y': self.positions[:, 1], 'z': self.positions[:, 2],
            'vx': self.velocities[:, 0], 'vy': self.velocities[:, 1], 'vz': self.velocities[:, 2],
            'r': self.radii,
        })
        if self.momenta is not None:
            for i, axis in enumerate('xyz'):
                frame[f'p{axis}'] = self.momenta[:, i]
        return frame


def _guiding_velocity(trajectory: HJTrajectory, t: float, s: np.ndarray) -> np.ndarray:
    radius = float(np.linalg.norm(s))
    v = float(trajectory.velocity_at(t, radius))
    return v * s / radius


def guide(trajectory: HJTrajectory, start, dt: Optional[float] = None) -> ParticleTrack:
    """
    Integrate ds/dt = grad Phi / sqrt(1 + |grad Phi|**2) with classical RK4.

    Args:
        trajectory (HJTrajectory): Evolved phase
        start: Initial position, strictly inside the radial grid
        dt (float): Step; defaults to the snapshot spacing

    Returns:
        ParticleTrack: Ends with reason 'infall' at r <= r_min, 'left_domain'
            at r >= r_max, otherwise 't_end'
    """
    s = validate_start(trajectory, start)
    t = trajectory.t_start
    t_end = trajectory.t_end
    if dt is None:
        dt = (trajectory.times[1] - trajectory.times[0]) if len(trajectory.times) > 1 else t_end - t
    if t_end > t and not dt > 0:
        raise UsageError("guiding step must be positive")

    times = [t]
    positions = [s.copy()]
    velocities = [_guiding_velocity(trajectory, t, s)]
    reason = 't_end'
    while t_end - t > 1e-12 * max(1.0, abs(t_end)):
        h = min(dt, t_end - t)
        k1 = velocities[-1]
        k2 = _guiding_velocity(trajectory, t + 0.5 * h, s + 0.5 * h * k1)
        k3 = _guiding_velocity(trajectory, t + 0.5 * h, s + 0.5 * h * k2)
        k4 = _guiding_velocity(trajectory, t + h, s + h * k3)
        s = s + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t_end if h == t_end - t else t + h
        radius = float(np.linalg.norm(s))
        times.append(t)
        positions.append(s.copy())
        if radius <= trajectory.r_min:
            reason = 'infall'
            velocities.append(_guiding_velocity(trajectory, t, s) if radius > 0 else np.zeros(3))
            break
        velocities.append(_guiding_velocity(trajectory, t, s))
        if radius >= trajectory.r_max:
            reason = 'left_domain'
            break

    track = ParticleTrack(times=times, positions=positions, velocities=velocities, reason=reason)
    logger.info(f"Guided track: {len(times)} samples, reason={reason}, "
                f"r {float(track.radii[0]):.6e} -> {float(track.radii[-1]):.6e}")
    return track
