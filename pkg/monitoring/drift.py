"""
Drift diagnostics over a sequence of conserved-quantity records.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np
from tabulate import tabulate

from monitoring.conservation import ConservedRecord
from physics.errors import UsageError

logger = logging.getLogger(__name__)

TINY = 1e-300


@dataclass
class DriftReport:
    """Per-quantity maximum relative drift and the M - tP residual series."""

    drifts: Dict[str, float]
    times: np.ndarray
    boost_residual: np.ndarray

    @property
    def boost_drift(self) -> float:
        return self.drifts['M-tP']

    def within(self, tolerance: float, quantities: Optional[Sequence[str]] = None) -> bool:
        names = quantities or [k for k in self.drifts if k != 'X']
        return all(self.drifts[name] <= tolerance for name in names if name in self.drifts)

    def as_table(self) -> str:
        rows = [[name, f"{value:.3e}"] for name, value in self.drifts.items()]
        return tabulate(rows, headers=['quantity', 'max relative drift'], tablefmt='github')


def _relative_drift(series: np.ndarray) -> float:
    """max_i |q_i - q_0| / max(|q_0|, max_i |q_i|) for scalar or vector series."""
    series = np.asarray(series, dtype=float)
    if series.ndim == 1:
        series = series[:, None]
    deviation = np.sqrt(np.sum((series - series[0]) ** 2, axis=1))
    magnitude = np.sqrt(np.sum(series ** 2, axis=1))
    scale = max(float(np.max(magnitude)), TINY)
    if float(np.max(deviation)) == 0.0:
        return 0.0
    return float(np.max(deviation)) / scale


def drift_report(records: Sequence[ConservedRecord]) -> DriftReport:
    """
    Drift of every conserved quantity along a run.

    Args:
        records: At least two records, in time order

    Returns:
        DriftReport: Relative drifts of Q, E, P, J, Y (when defined), X
            (reported only) and the boost residual M - tP
    """
    if len(records) < 2:
        raise UsageError("drift report needs at least two records")
    times = np.array([r.time for r in records])
    drifts = {
        'Q': _relative_drift([r.Q for r in records]),
        'E': _relative_drift([r.E_total for r in records]),
        'P': _relative_drift(np.array([r.P for r in records])),
        'J': _relative_drift(np.array([r.J for r in records])),
    }
    if all(r.Y is not None for r in records):
        drifts['Y'] = _relative_drift([r.Y for r in records])
    if all(r.X is not None for r in records):
        drifts['X'] = _relative_drift([r.X for r in records])

    boost = np.array([r.M - r.time * r.P for r in records])
    drifts['M-tP'] = _relative_drift(boost)
    logger.info(f"Drift over {len(records)} records: "
                + ", ".join(f"{k}={v:.2e}" for k, v in drifts.items()))
    return DriftReport(drifts=drifts, times=times, boost_residual=boost)


class ConservationMonitor:
    """
    Collects records during a run and flags drifts above a tolerance
    """

    def __init__(self, tolerance: float = 1e-6):
        self.tolerance = tolerance
        self.records: List[ConservedRecord] = []

    def record(self, rec: ConservedRecord):
        self.records.append(rec)

    def report(self) -> DriftReport:
        report = drift_report(self.records)
        for name, value in report.drifts.items():
            if name != 'X' and value > self.tolerance:
                logger.warning(f"{name} drift {value:.3e} exceeds {self.tolerance:.1e}")
        return report
