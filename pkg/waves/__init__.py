"""
Waves Package

Transverse Born-Infeld fields on a periodic line: exact traveling
solutions, method-of-lines evolution and pulse collisions.
"""

from waves.profiles import PulseProfile, traveling_components
from waves.evolution import (
    FieldState1D,
    SchemeConfig,
    WaveTrajectory,
    MomentWindow,
    make_traveling_solution,
    superpose,
    reverse_time,
    l2_distance,
    rhs,
    linear_rhs,
    evolve,
    wave_record,
)
from waves.collision import CollisionReport, collide_pulses, riemann_split

__all__ = [
    'PulseProfile',
    'traveling_components',
    'FieldState1D',
    'SchemeConfig',
    'WaveTrajectory',
    'MomentWindow',
    'make_traveling_solution',
    'superpose',
    'reverse_time',
    'l2_distance',
    'rhs',
    'linear_rhs',
    'evolve',
    'wave_record',
    'CollisionReport',
    'collide_pulses',
    'riemann_split',
]
