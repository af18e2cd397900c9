"""
Agreement between a guided track and the test-particle oracle.
"""

import logging
from dataclasses import dataclass

import numpy as np

from guidance.guiding import ParticleTrack
from physics.errors import UsageError

logger = logging.getLogger(__name__)


@dataclass
class ReductionReport:
    discrepancy: float
    window: tuple
    samples: int
    r_window: float

    def within(self, tolerance: float) -> bool:
        return self.discrepancy <= tolerance

    def to_dict(self) -> dict:
        return {
            'discrepancy': self.discrepancy,
            'window_start': self.window[0],
            'window_end': self.window[1],
            'samples': self.samples,
            'r_window': self.r_window,
        }


def _last_time_outside(track: ParticleTrack, r_window: float) -> float:
    inside = np.nonzero(track.radii < r_window)[0]
    return float(track.times[inside[0] - 1]) if inside.size else float(track.times[-1])


def reduction_comparison(hj_track: ParticleTrack, oracle_track: ParticleTrack,
                         r_window: float) -> ReductionReport:
    """
    sup_t |s_hj(t) - s_oracle(t)| / |s_oracle(t)| over times where both
    tracks stay at r >= r_window. Oracle positions are linearly interpolated
    to the guided sample times.

    Raises:
        UsageError: different starting points or no common window
    """
    if not np.allclose(hj_track.positions[0], oracle_track.positions[0], rtol=1e-12, atol=0.0):
        raise UsageError("tracks must start at the same position")
    if hj_track.radii[0] < r_window or oracle_track.radii[0] < r_window:
        raise UsageError(f"tracks start inside the comparison radius {r_window:.6e}")
    t_lo = max(hj_track.times[0], oracle_track.times[0])
    t_hi = min(_last_time_outside(hj_track, r_window), _last_time_outside(oracle_track, r_window))
    mask = (hj_track.times >= t_lo) & (hj_track.times <= t_hi)
    if t_hi < t_lo or not np.any(mask):
        raise UsageError("tracks have no overlapping comparison window")

    times = hj_track.times[mask]
    reference = np.column_stack([np.interp(times, oracle_track.times, oracle_track.positions[:, i])
                                 for i in range(3)])
    error = np.linalg.norm(hj_track.positions[mask] - reference, axis=1)
    discrepancy = float(np.max(error / np.linalg.norm(reference, axis=1)))
    logger.info(f"Reduction discrepancy {discrepancy:.3e} over t in [{t_lo:.4e}, {t_hi:.4e}] "
                f"({int(mask.sum())} samples)")
    return ReductionReport(discrepancy=discrepancy, window=(float(t_lo), float(t_hi)),
                           samples=int(mask.sum()), r_window=r_window)
