"""
Background potential A1(r) felt by an electron at distance r from a frozen
nucleus: the electron's own finite central value plus the nucleus field,
corrected by the nonlinear interaction when tabulated from static solves.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.interpolate import PchipInterpolator

from config.settings import PARALLEL_WORKERS
from electrostatics.analysis import evaluate_A1
from electrostatics.born import born_central_value
from electrostatics.solver import PointCharge, SolverConfig, solve_electrostatic
from physics.errors import ConfigurationError, DomainError

logger = logging.getLogger(__name__)

MODES = ('isolated', 'coulomb', 'tabulated')


def electron_nucleus_pair(separation: float):
    """Frozen unit nucleus at the origin and an electron on the z axis."""
    return [
        PointCharge(z=1, position=[0.0, 0.0, 0.0], kappa=0.0),
        PointCharge(z=-1, position=[0.0, 0.0, separation], kappa=1.0),
    ]


def solve_a1(separation: float, beta: float, config: Optional[SolverConfig] = None) -> float:
    """A1 at one electron-nucleus separation from a full static solve."""
    sol = solve_electrostatic(electron_nucleus_pair(separation), beta, config)
    return evaluate_A1(sol, 1)


@dataclass
class A1Profile:
    """
    A1 as a function of the electron-nucleus distance.

    Modes:
        isolated: no nucleus, A1 = A_Born^-(0)
        coulomb: A_Born^-(0) + 1/r, the leading far-field form
        tabulated: monotone cubic in log r through solver samples, with the
            linear small-r law below the first sample and the Coulomb form
            plus an r**-2 correction above the last one
    """

    beta: float
    mode: str = 'coulomb'
    separations: np.ndarray = field(default_factory=lambda: np.zeros(0))
    values: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigurationError(f"unknown A1 profile mode '{self.mode}'", path='a1_source')
        self.separations = np.asarray(self.separations, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.mode == 'tabulated':
            if self.separations.size < 2 or np.any(np.diff(self.separations) <= 0):
                raise ConfigurationError("tabulated A1 needs at least two increasing separations",
                                         path='a1_separations')
            self._spline = PchipInterpolator(np.log(self.separations), self.values)

    @property
    def self_value(self) -> float:
        return born_central_value(self.beta, sign=-1)

    @classmethod
    def isolated(cls, beta: float) -> "A1Profile":
        return cls(beta=beta, mode='isolated')

    @classmethod
    def coulomb(cls, beta: float) -> "A1Profile":
        return cls(beta=beta, mode='coulomb')

    @classmethod
    def from_solver(cls, beta: float, separations: Sequence[float],
                    config: Optional[SolverConfig] = None,
                    workers: int = PARALLEL_WORKERS) -> "A1Profile":
        """
        Tabulate A1 from independent static solves run concurrently.

        Args:
            beta (float): Aether constant
            separations: Electron-nucleus distances
            config (SolverConfig): Static solver controls
            workers (int): Thread pool size

        Returns:
            A1Profile: Tabulated profile
        """
        separations = sorted(float(s) for s in separations)
        results: Dict[float, float] = {}
        logger.info(f"Tabulating A1 at {len(separations)} separations with {workers} workers")
        with ThreadPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(solve_a1, s, beta, config): s for s in separations}
            for future in as_completed(futures):
                s = futures[future]
                results[s] = future.result()
                logger.info(f"A1({s:.6g}) = {results[s]:.12e}")
        return cls(beta=beta, mode='tabulated', separations=np.array(separations),
                   values=np.array([results[s] for s in separations]))

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("A1 profile is defined for r > 0")
        if self.mode == 'isolated':
            return np.full_like(r, self.self_value)
        coulomb = self.self_value + 1.0 / r
        if self.mode == 'coulomb':
            return coulomb
        lo, hi = self.separations[0], self.separations[-1]
        out = np.empty_like(r)
        inner = r < lo
        outer = r > hi
        middle = ~(inner | outer)
        out[middle] = self._spline(np.log(r[middle]))
        out[inner] = self.values[0] * r[inner] / lo
        correction = self.values[-1] - (self.self_value + 1.0 / hi)
        out[outer] = coulomb[outer] + correction * (hi / r[outer]) ** 2
        return out

    def to_dict(self) -> dict:
        return {
            'mode': self.mode,
            'beta': self.beta,
            'separations': [float(s) for s in self.separations],
            'values': [float(v) for v in self.values],
        }
