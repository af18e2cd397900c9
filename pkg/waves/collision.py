"""
Head-on collision of counter-propagating pulses.

The incoming pulses are superposed, evolved through each other and split
again into right- and left-moving parts. Each outgoing part is compared with
the same pulse run alone through the same scheme, so the measured
displacement carries no discretisation bias; the shape is compared with the
exact profile translated by free flight plus that displacement.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from tabulate import tabulate

from monitoring.drift import drift_report
from physics.errors import ConfigurationError
from waves.evolution import (
    FieldState1D,
    SchemeConfig,
    WaveTrajectory,
    evolve,
    make_traveling_solution,
    superpose,
)
from waves.profiles import PulseProfile, traveling_components

logger = logging.getLogger(__name__)


def riemann_split(state: FieldState1D):
    """
    Split into right- and left-moving inductions.

    Right movers satisfy D = B x z_hat, left movers D = -B x z_hat.

    Returns:
        tuple: ((Bx_R, By_R), (Bx_L, By_L))
    """
    right = (0.5 * (state.Bx - state.Dy), 0.5 * (state.By + state.Dx))
    left = (0.5 * (state.Bx + state.Dy), 0.5 * (state.By - state.Dx))
    return right, left


def circular_centroid(z: np.ndarray, weight: np.ndarray, length: float) -> float:
    """Weighted centroid on the circle of circumference ``length``."""
    angle = 2.0 * np.pi * z / length
    c = math.fsum(weight * np.cos(angle))
    s = math.fsum(weight * np.sin(angle))
    return float(np.mod(math.atan2(s, c) * length / (2.0 * np.pi), length))


def wrap(d: float, length: float) -> float:
    return float(np.mod(d + 0.5 * length, length) - 0.5 * length)


@dataclass
class CollisionReport:
    displacement: Dict[str, float]
    shape_distance: Dict[str, float]
    energy_drift: float
    trajectory: WaveTrajectory

    def as_table(self) -> str:
        rows = [[side, f"{self.displacement[side]:.6e}", f"{self.shape_distance[side]:.3e}"]
                for side in ('right', 'left')]
        return tabulate(rows, headers=['pulse', 'displacement', 'relative L2 shape distance'],
                        tablefmt='github') + f"\nenergy drift: {self.energy_drift:.3e}"


def _outgoing_distance(profile: PulseProfile, z, t, shift, observed, length, dz) -> float:
    bx, by, _, _ = traveling_components(profile, z - profile.direction * shift, t, length)
    incoming_norm = math.sqrt(dz * math.fsum(bx ** 2 + by ** 2))
    diff = math.sqrt(dz * math.fsum((observed[0] - bx) ** 2 + (observed[1] - by) ** 2))
    return diff / incoming_norm if incoming_norm > 0 else 0.0


def collide_pulses(right: PulseProfile, left: PulseProfile, L: float, n: int, beta: float,
                   t_end: float, config: Optional[SchemeConfig] = None,
                   alpha: float = 1.0) -> CollisionReport:
    """
    Run a head-on collision and measure the outgoing pulses.

    Args:
        right (PulseProfile): Pulse with direction +1
        left (PulseProfile): Pulse with direction -1
        L (float): Period
        n (int): Cell count
        beta (float): Aether constant
        t_end (float): Final time, after the pulses have separated again
        config (SchemeConfig): Scheme controls
        alpha (float): Fine structure constant for the energy records

    Returns:
        CollisionReport: Displacements, shape distances and energy drift
    """
    if right.direction != 1 or left.direction != -1:
        raise ConfigurationError("collision needs a right-moving and a left-moving pulse", path='pulses')
    initial = superpose([make_traveling_solution(right, 0.0, L, n),
                         make_traveling_solution(left, 0.0, L, n)])
    trajectory = evolve(initial, beta, t_end, config, alpha=alpha)
    final = trajectory.final
    (bx_r, by_r), (bx_l, by_l) = riemann_split(final)
    z = final.z

    displacement = {}
    distance = {}
    for side, profile, observed in (('right', right, (bx_r, by_r)), ('left', left, (bx_l, by_l))):
        alone = evolve(make_traveling_solution(profile, 0.0, L, n), beta, t_end, config, alpha=alpha).final
        free_bx, free_by = riemann_split(alone)[0 if profile.direction == 1 else 1]
        expected_center = circular_centroid(z, free_bx ** 2 + free_by ** 2, L)
        measured_center = circular_centroid(z, observed[0] ** 2 + observed[1] ** 2, L)
        # positive displacement means the pulse ran ahead of free flight
        shift = profile.direction * wrap(measured_center - expected_center, L)
        displacement[side] = shift
        distance[side] = _outgoing_distance(profile, z, t_end, shift, observed, L, final.dz)

    energy_drift = drift_report(trajectory.records).drifts['E']
    logger.info(f"Collision: displacement={displacement}, shape distance={distance}, "
                f"energy drift={energy_drift:.3e}")
    return CollisionReport(displacement=displacement, shape_distance=distance,
                           energy_drift=energy_drift, trajectory=trajectory)
