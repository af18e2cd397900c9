"""
Radial Hamilton-Jacobi evolution of the electron phase in a frozen background.

With the nucleus frozen at the origin and no magnetic potential the phase
obeys

    dPhi/dt = -sqrt(1 + (dPhi/dr)**2) - z alpha A1(r),     z = -1,

solved by a monotone local Lax-Friedrichs scheme. The phase is split as
Phi = Phi_0 + K_far (t - t_0) + phi with K_far = -1 - z alpha A1(r_max), so the
uniform far-field drift is carried exactly and only phi is stepped:

    dphi/dt = -(sqrt(1 + phi_r**2) - 1) - z alpha (A1 - A1(r_max)).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator

from config.settings import DEFAULT_ALPHA, HJ_CELLS_PER_BETA, HJ_CFL, HJ_CFL_LIMIT, HJ_GRADIENT_CAP
from physics.errors import ConfigurationError, HamiltonJacobiBreakdown, UsageError

logger = logging.getLogger(__name__)

ELECTRON = -1


def kinetic(p: np.ndarray) -> np.ndarray:
    """sqrt(1 + p**2) - 1 without cancellation."""
    return p * p / (np.sqrt(1.0 + p * p) + 1.0)


def guiding_speed(p: np.ndarray) -> np.ndarray:
    return p / np.sqrt(1.0 + p * p)


@dataclass
class RadialHJState:
    """Phase samples on a uniform radial grid with the frozen background A1."""

    r_grid: np.ndarray
    Phi: np.ndarray
    A1: np.ndarray
    alpha: float = DEFAULT_ALPHA
    time: float = 0.0
    z: int = ELECTRON

    def __post_init__(self):
        self.r_grid = np.asarray(self.r_grid, dtype=float)
        self.Phi = np.asarray(self.Phi, dtype=float)
        self.A1 = np.asarray(self.A1, dtype=float)
        n = self.r_grid.size
        if n < 3 or self.r_grid[0] <= 0:
            raise ConfigurationError("radial grid needs at least 3 points with r_min > 0", path='grid')
        steps = np.diff(self.r_grid)
        if np.any(steps <= 0) or not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
            raise ConfigurationError("radial grid must be uniform and increasing", path='grid')
        if self.Phi.shape != (n,) or self.A1.shape != (n,):
            raise ConfigurationError("Phi and A1 must be sampled on the radial grid", path='state')
        if not np.all(np.isfinite(self.A1)):
            raise ConfigurationError("A1 must be finite on the grid", path='state.A1')

    @property
    def dr(self) -> float:
        return float(self.r_grid[1] - self.r_grid[0])

    @property
    def r_min(self) -> float:
        return float(self.r_grid[0])

    @property
    def r_max(self) -> float:
        return float(self.r_grid[-1])

    @property
    def far_rate(self) -> float:
        """K_far, the phase rate where the background is taken constant."""
        return -1.0 - self.z * self.alpha * float(self.A1[-1])

    def gradient(self) -> np.ndarray:
        return np.gradient(self.Phi, self.r_grid, edge_order=2)


def radial_grid(r_min: float, r_max: float, dr: float) -> np.ndarray:
    if not 0 < r_min < r_max or not dr > 0:
        raise ConfigurationError("need 0 < r_min < r_max and dr > 0", path='grid')
    n = int(round((r_max - r_min) / dr))
    return r_min + dr * np.arange(n + 1)


def build_radial_state(profile: Callable, r_min: float, r_max: float, dr: float,
                       alpha: float = DEFAULT_ALPHA, phi0: float = 0.0,
                       time: float = 0.0) -> RadialHJState:
    """Constant initial phase over a uniform grid with A1 sampled from ``profile``."""
    r = radial_grid(r_min, r_max, dr)
    return RadialHJState(r_grid=r, Phi=np.full(r.size, float(phi0)),
                         A1=np.asarray(profile(r), dtype=float), alpha=alpha, time=time)


def static_electron_state(profile: Callable, beta: float, alpha: float = DEFAULT_ALPHA,
                          r_max: Optional[float] = None,
                          cells_per_beta: int = HJ_CELLS_PER_BETA) -> RadialHJState:
    """Isolated electron; ``profile`` is its own constant central value, see A1Profile.isolated."""
    r_max = r_max or 10.0 * beta
    return build_radial_state(profile, beta, r_max, beta / cells_per_beta, alpha)


def nucleus_infall_state(profile, r0: float, beta: float, alpha: float = DEFAULT_ALPHA,
                         cells_per_beta: int = HJ_CELLS_PER_BETA,
                         outer_factor: float = 3.0) -> RadialHJState:
    """Electron released at r0 around a frozen nucleus, grid on [beta, outer_factor r0]."""
    return build_radial_state(profile, beta, outer_factor * r0, beta / cells_per_beta, alpha)


def gauge_shift(state: RadialHJState, c: float) -> RadialHJState:
    """Same state with the background shifted by the constant c."""
    return RadialHJState(r_grid=state.r_grid, Phi=state.Phi, A1=state.A1 + c,
                         alpha=state.alpha, time=state.time, z=state.z)


@dataclass
class HJConfig:
    cfl: float = HJ_CFL
    cfl_limit: float = HJ_CFL_LIMIT
    snapshot_every: int = 20
    gradient_cap: float = HJ_GRADIENT_CAP

    def validate(self):
        # the LLF dissipation bound is 1, the sup of |dH/dp|
        if not 0 < self.cfl <= self.cfl_limit:
            raise ConfigurationError(
                f"CFL number {self.cfl} outside (0, {self.cfl_limit}]", path='scheme.cfl')
        if self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be at least 1", path='scheme.snapshot_every')
        return self

    def to_dict(self) -> dict:
        return {
            'method': 'llf-monotone/forward-euler',
            'cfl': self.cfl,
            'snapshot_every': self.snapshot_every,
        }


@dataclass
class HJTrajectory:
    """
    Phase snapshots of one evolution.

    ``phis`` holds the stepped part; the full phase at snapshot k is
    ``phis[k] + offsets[k]``.
    """

    r_grid: np.ndarray
    A1: np.ndarray
    alpha: float
    z: int
    times: List[float] = field(default_factory=list)
    offsets: List[float] = field(default_factory=list)
    phis: List[np.ndarray] = field(default_factory=list)
    dt: float = 0.0
    steps: int = 0

    def __post_init__(self):
        self._splines: Dict[int, PchipInterpolator] = {}

    @property
    def r_min(self) -> float:
        return float(self.r_grid[0])

    @property
    def r_max(self) -> float:
        return float(self.r_grid[-1])

    @property
    def t_start(self) -> float:
        return self.times[0]

    @property
    def t_end(self) -> float:
        return self.times[-1]

    def phase(self, k: int) -> np.ndarray:
        return self.phis[k] + self.offsets[k]

    def state(self, k: int) -> RadialHJState:
        return RadialHJState(r_grid=self.r_grid, Phi=self.phase(k), A1=self.A1,
                             alpha=self.alpha, time=self.times[k], z=self.z)

    @property
    def final(self) -> RadialHJState:
        return self.state(len(self.times) - 1)

    def snapshot_gradient(self, k: int) -> np.ndarray:
        return np.gradient(self.phis[k], self.r_grid, edge_order=2)

    def _spline(self, k: int) -> PchipInterpolator:
        if k not in self._splines:
            self._splines[k] = PchipInterpolator(self.r_grid, self.snapshot_gradient(k), extrapolate=True)
        return self._splines[k]

    def gradient_at(self, t: float, r) -> np.ndarray:
        """
        dPhi/dr at time t and radius r.

        Monotone cubic in r on each snapshot, linear in time between snapshots.
        Radii are clipped to the grid.
        """
        r = np.clip(np.asarray(r, dtype=float), self.r_min, self.r_max)
        times = np.asarray(self.times)
        if t <= times[0]:
            return self._spline(0)(r)
        if t >= times[-1]:
            return self._spline(len(times) - 1)(r)
        k = int(np.searchsorted(times, t, side='right')) - 1
        w = (t - times[k]) / (times[k + 1] - times[k])
        return (1.0 - w) * self._spline(k)(r) + w * self._spline(k + 1)(r)

    def velocity_at(self, t: float, r) -> np.ndarray:
        """Radial guiding velocity, |v| < 1."""
        return guiding_speed(self.gradient_at(t, r))

    def to_frame(self) -> pd.DataFrame:
        """Long-format phase snapshots for CSV export."""
        frames = []
        for k, t in enumerate(self.times):
            frames.append(pd.DataFrame({
                't': t,
                'r': self.r_grid,
                'Phi': self.phase(k),
                'dPhi_dr': self.snapshot_gradient(k),
                'A1': self.A1,
            }))
        return pd.concat(frames, ignore_index=True)


def numerical_hamiltonian(phi: np.ndarray, dr: float) -> np.ndarray:
    """
    Local Lax-Friedrichs numerical Hamiltonian for H(p) = sqrt(1 + p**2) - 1.

    Ghost values extrapolate linearly at both ends, which reduces the flux to
    the one-sided gradient there.
    """
    ext = np.concatenate(([2.0 * phi[0] - phi[1]], phi, [2.0 * phi[-1] - phi[-2]]))
    p_minus = (ext[1:-1] - ext[:-2]) / dr
    p_plus = (ext[2:] - ext[1:-1]) / dr
    theta = np.maximum(np.abs(guiding_speed(p_minus)), np.abs(guiding_speed(p_plus)))
    return kinetic(0.5 * (p_minus + p_plus)) - 0.5 * theta * (p_plus - p_minus)


def hj_evolve(state: RadialHJState, t_end: float, config: Optional[HJConfig] = None) -> HJTrajectory:
    """
    Evolve the radial phase from ``state.time`` to ``t_end``.

    Args:
        state (RadialHJState): Initial phase and frozen background
        t_end (float): Final time
        config (HJConfig): Scheme controls

    Returns:
        HJTrajectory: Snapshots every ``snapshot_every`` steps and at t_end

    Raises:
        ConfigurationError: CFL number outside (0, 1] or t_end before the start
        HamiltonJacobiBreakdown: non-finite phase or gradient beyond the cap
    """
    config = (config or HJConfig()).validate()
    t0 = state.time
    duration = t_end - t0
    if duration < 0:
        raise ConfigurationError("t_end precedes the initial time", path='t_end')
    dr = state.dr
    steps = int(math.ceil(duration / (config.cfl * dr))) if duration > 0 else 0
    dt = duration / steps if steps else 0.0

    far = float(state.A1[-1])
    source = -state.z * state.alpha * (state.A1 - far)
    rate = state.far_rate

    trajectory = HJTrajectory(r_grid=state.r_grid, A1=state.A1, alpha=state.alpha, z=state.z,
                              dt=dt, steps=steps)
    phi = state.Phi.copy()
    trajectory.times.append(t0)
    trajectory.offsets.append(0.0)
    trajectory.phis.append(phi.copy())
    logger.info(f"HJ evolution: {state.r_grid.size} points, dr={dr:.4e}, {steps} steps to t={t_end}, "
                f"K_far={rate:.12e}")

    for step in range(1, steps + 1):
        phi = phi + dt * (source - numerical_hamiltonian(phi, dr))
        t = t_end if step == steps else t0 + step * dt
        p = np.abs(np.nan_to_num(np.diff(phi) / dr, nan=math.inf))
        max_gradient = float(np.max(p))
        if not np.all(np.isfinite(phi)) or max_gradient > config.gradient_cap:
            bad = int(np.argmax(p))
            diagnostics = {'step': step, 'time': t, 'max_gradient': max_gradient,
                           'radius': float(state.r_grid[bad])}
            logger.error(f"HJ breakdown at step {step}: {diagnostics}")
            raise HamiltonJacobiBreakdown(
                f"phase lost consistency at t={t:.6e} (max |dPhi/dr| = {max_gradient:.3e})",
                last_good=trajectory.state(len(trajectory.times) - 1), diagnostics=diagnostics)
        if step % config.snapshot_every == 0 or step == steps:
            trajectory.times.append(t)
            trajectory.offsets.append(rate * (t - t0))
            trajectory.phis.append(phi.copy())
    return trajectory


def validate_start(trajectory: HJTrajectory, start) -> np.ndarray:
    start = np.asarray(start, dtype=float)
    if start.shape != (3,):
        raise UsageError("start position must be a 3-vector")
    radius = float(np.linalg.norm(start))
    if radius == 0.0:
        raise UsageError("start coincides with the nucleus")
    if not trajectory.r_min < radius < trajectory.r_max:
        raise UsageError(f"start radius {radius:.6e} outside ({trajectory.r_min:.6e}, {trajectory.r_max:.6e})")
    return start
