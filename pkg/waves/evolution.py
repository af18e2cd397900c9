"""
Source-free Born-Infeld evolution of transverse fields on a periodic line.

Method of lines: fourth-order conservative central flux in z, classical
Runge-Kutta in time. The curl equations reduce to

    dBx/dt =  dEy/dz,   dBy/dt = -dEx/dz,
    dDx/dt = -dHy/dz,   dDy/dt =  dHx/dz,

with (E, H) from the aether law at every cell.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from config.settings import DEFAULT_ALPHA, WAVE_CFL, WAVE_CFL_LIMIT
from monitoring.conservation import ConservedRecord, field_functionals
from monitoring.helicity import cross_helicity_1d, helicity_1d
from physics.aether import BDState, energy_density, fields_from_state
from physics.errors import ConfigurationError, DomainError, NumericalAbort
from waves.profiles import PulseProfile, traveling_components

logger = logging.getLogger(__name__)


@dataclass
class FieldState1D:
    """Cell-centred transverse fields; cell i sits at z = (i + 1/2) L / n."""

    L: float
    n: int
    Bx: np.ndarray
    By: np.ndarray
    Dx: np.ndarray
    Dy: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if not self.L > 0 or self.n < 4:
            raise ConfigurationError("need L > 0 and at least 4 cells", path='grid')
        for name in ('Bx', 'By', 'Dx', 'Dy'):
            values = np.asarray(getattr(self, name), dtype=float)
            if values.shape != (self.n,):
                raise ConfigurationError(f"{name} must have {self.n} samples", path=f'state.{name}')
            setattr(self, name, values)

    @classmethod
    def zeros(cls, L: float, n: int, time: float = 0.0) -> "FieldState1D":
        z = np.zeros(n)
        return cls(L, n, z, z.copy(), z.copy(), z.copy(), time)

    @property
    def dz(self) -> float:
        return self.L / self.n

    @property
    def z(self) -> np.ndarray:
        return (np.arange(self.n) + 0.5) * self.dz

    def components(self):
        return self.Bx, self.By, self.Dx, self.Dy

    def vectors(self):
        """B and D as (n, 3) arrays with vanishing z-components."""
        zeros = np.zeros(self.n)
        B = np.column_stack([self.Bx, self.By, zeros])
        D = np.column_stack([self.Dx, self.Dy, zeros])
        return B, D

    def with_components(self, bx, by, dx, dy, time: float) -> "FieldState1D":
        return FieldState1D(self.L, self.n, bx, by, dx, dy, time)

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(c)) for c in self.components())


def make_traveling_solution(profile: PulseProfile, t: float, L: float, n: int) -> FieldState1D:
    """
    Exact traveling wave sampled at time t.

    Args:
        profile (PulseProfile): Profile, direction and polarization
        t (float): Time
        L (float): Period
        n (int): Cell count

    Returns:
        FieldState1D: Cell samples of B(z - d t), D = d B x z_hat
    """
    state = FieldState1D.zeros(L, n, time=t)
    bx, by, dx, dy = traveling_components(profile, state.z, t, L)
    return state.with_components(bx, by, dx, dy, t)


def superpose(states: Sequence[FieldState1D]) -> FieldState1D:
    """Componentwise sum of states on the same grid (initial data for collisions)."""
    first = states[0]
    if any(s.n != first.n or s.L != first.L for s in states):
        raise ConfigurationError("superposed states must share the grid", path='pulses')
    parts = [sum(getattr(s, name) for s in states) for name in ('Bx', 'By', 'Dx', 'Dy')]
    return first.with_components(*parts, time=first.time)


def reverse_time(state: FieldState1D) -> FieldState1D:
    """(B, D) -> (B, -D): evolving the result forward runs the original backward."""
    return state.with_components(state.Bx, state.By, -state.Dx, -state.Dy, state.time)


def l2_distance(a: FieldState1D, b: FieldState1D) -> float:
    """Discrete L2 distance over all four components."""
    if a.n != b.n or a.L != b.L:
        raise ConfigurationError("states must share the grid", path='state')
    total = sum(np.sum((x - y) ** 2) for x, y in zip(a.components(), b.components()))
    return math.sqrt(total * a.dz)


def periodic_derivative(f: np.ndarray, dz: float) -> np.ndarray:
    """
    Fourth-order conservative central derivative.

    Interface flux F_{i+1/2} = (7 (f_i + f_{i+1}) - (f_{i-1} + f_{i+2})) / 12.
    """
    flux = (7.0 * (f + np.roll(f, -1)) - (np.roll(f, 1) + np.roll(f, -2))) / 12.0
    return (flux - np.roll(flux, 1)) / dz


def _viscous(f: np.ndarray, dz: float, viscosity: float) -> np.ndarray:
    return viscosity * (np.roll(f, -1) - 2.0 * f + np.roll(f, 1)) / dz


@dataclass
class SchemeConfig:
    """Time-stepping controls; ``viscosity`` is the dimensionless artificial diffusion."""

    cfl: float = WAVE_CFL
    cfl_limit: float = WAVE_CFL_LIMIT
    viscosity: float = 0.0
    snapshot_every: int = 10
    record_helicity: bool = True

    def validate(self):
        if not 0 < self.cfl <= self.cfl_limit:
            raise ConfigurationError(
                f"CFL number {self.cfl} outside (0, {self.cfl_limit}]", path='scheme.cfl')
        if self.viscosity < 0:
            raise ConfigurationError("viscosity must be non-negative", path='scheme.viscosity')
        if self.snapshot_every < 1:
            raise ConfigurationError("snapshot_every must be at least 1", path='scheme.snapshot_every')
        return self

    def to_dict(self) -> dict:
        return {
            'method': 'central-flux-4/rk4',
            'cfl': self.cfl,
            'viscosity': self.viscosity,
            'snapshot_every': self.snapshot_every,
        }


def rhs(state: FieldState1D, beta: float, viscosity: float = 0.0):
    """
    Time derivative of (Bx, By, Dx, Dy).

    Args:
        state (FieldState1D): Current fields
        beta (float): Aether constant
        viscosity (float): Artificial viscosity coefficient

    Returns:
        tuple: (dBx, dBy, dDx, dDy)
    """
    B, D = state.vectors()
    f = fields_from_state(BDState(B=B, D=D), beta)
    dz = state.dz
    d_bx = periodic_derivative(f.E[:, 1], dz)
    d_by = -periodic_derivative(f.E[:, 0], dz)
    d_dx = -periodic_derivative(f.H[:, 1], dz)
    d_dy = periodic_derivative(f.H[:, 0], dz)
    if viscosity > 0:
        d_bx = d_bx + _viscous(state.Bx, dz, viscosity)
        d_by = d_by + _viscous(state.By, dz, viscosity)
        d_dx = d_dx + _viscous(state.Dx, dz, viscosity)
        d_dy = d_dy + _viscous(state.Dy, dz, viscosity)
    return d_bx, d_by, d_dx, d_dy


def linear_rhs(state: FieldState1D):
    """Vacuum Maxwell right-hand side (E = D, H = B)."""
    dz = state.dz
    return (periodic_derivative(state.Dy, dz), -periodic_derivative(state.Dx, dz),
            -periodic_derivative(state.By, dz), periodic_derivative(state.Bx, dz))


@dataclass
class MomentWindow:
    """
    Where the periodic line is cut open for the energy moment.

    Cells before ``cut`` sit at z + L. Moving the cut relabels the energy it
    sweeps over by one period; ``offset`` absorbs that so M stays continuous.
    """

    cut: int = 0
    offset: float = 0.0

    def lifted(self, state: FieldState1D) -> np.ndarray:
        z = state.z.copy()
        z[:self.cut] += state.L
        return z

    def recut(self, state: FieldState1D, alpha: float, beta: float):
        """Move the cut to the cell of least energy density."""
        B, D = state.vectors()
        cells = energy_density(B, D, alpha, beta) * state.dz
        new = int(np.argmin(cells))
        self.offset += state.L * (math.fsum(cells[:self.cut]) - math.fsum(cells[:new]))
        self.cut = new
        return self


def wave_record(state: FieldState1D, alpha: float, beta: float,
                with_helicity: bool = True, window: Optional[MomentWindow] = None) -> ConservedRecord:
    """
    Conserved functionals per unit cross-section.

    The charge is the net flux of D_z through the two end planes, zero for
    transverse fields. Helicities are left unset when a component has a
    nonzero mean. Without a ``window`` the moment uses z in [0, L).
    """
    window = window or MomentWindow()
    B, D = state.vectors()
    coords = np.column_stack([np.zeros(state.n), np.zeros(state.n), window.lifted(state)])
    weights = np.full(state.n, state.dz)
    record = field_functionals(B, D, coords, weights, alpha, beta, time=state.time)
    if window.offset:
        record = replace(record, M=record.M + np.array([0.0, 0.0, window.offset]))
    if with_helicity:
        try:
            y_b = helicity_1d(state.Bx, state.By, state.L)
            y_d = helicity_1d(state.Dx, state.Dy, state.L)
            x = cross_helicity_1d(state.Bx, state.By, state.Dx, state.Dy, state.L)
            record = replace(record, Y_B=y_b, Y_D=y_d, X=x)
        except DomainError:
            pass
    return record


@dataclass
class WaveTrajectory:
    snapshots: List[FieldState1D] = field(default_factory=list)
    records: List[ConservedRecord] = field(default_factory=list)
    dt: float = 0.0
    steps: int = 0

    @property
    def final(self) -> FieldState1D:
        return self.snapshots[-1]


def _rk4_step(state: FieldState1D, dt: float, beta: float, viscosity: float) -> FieldState1D:
    def shifted(base, k, h):
        return base.with_components(*(c + h * d for c, d in zip(base.components(), k)), time=base.time + h)

    k1 = rhs(state, beta, viscosity)
    k2 = rhs(shifted(state, k1, 0.5 * dt), beta, viscosity)
    k3 = rhs(shifted(state, k2, 0.5 * dt), beta, viscosity)
    k4 = rhs(shifted(state, k3, dt), beta, viscosity)
    new = [c + dt / 6.0 * (a + 2.0 * b + 2.0 * cc + d)
           for c, a, b, cc, d in zip(state.components(), k1, k2, k3, k4)]
    return state.with_components(*new, time=state.time + dt)


def evolve(state: FieldState1D, beta: float, t_end: float,
           config: Optional[SchemeConfig] = None, alpha: float = DEFAULT_ALPHA) -> WaveTrajectory:
    """
    Evolve from ``state.time`` to ``t_end``.

    The step is dt = T / ceil(T / (cfl dz)) so the run ends exactly at t_end.
    Snapshots (with conserved records) are taken every ``snapshot_every``
    steps and at the final time.
    Between records the moment window is re-cut at the emptiest cell, so a
    pulse can cross the periodic boundary without a jump in M.

    Raises:
        ConfigurationError: CFL number outside the configured bound
        NumericalAbort: non-finite fields; ``last_good`` holds the last snapshot
    """
    config = (config or SchemeConfig()).validate()
    duration = t_end - state.time
    if duration < 0:
        raise ConfigurationError("t_end precedes the initial time", path='t_end')
    steps = int(math.ceil(duration / (config.cfl * state.dz))) if duration > 0 else 0
    dt = duration / steps if steps else 0.0

    trajectory = WaveTrajectory(dt=dt, steps=steps)
    trajectory.snapshots.append(state)
    window = MomentWindow()
    trajectory.records.append(wave_record(state, alpha, beta, config.record_helicity, window))
    window.recut(state, alpha, beta)
    logger.info(f"Evolving {state.n} cells to t={t_end} in {steps} steps (dt={dt:.4e}, beta={beta})")

    current = state
    for step in range(1, steps + 1):
        current = _rk4_step(current, dt, beta, config.viscosity)
        if step == steps:
            current = replace(current, time=t_end)
        if not current.is_finite():
            raise NumericalAbort(f"non-finite fields at step {step} (t={current.time:.6e})",
                                 last_good=trajectory.snapshots[-1])
        if step % config.snapshot_every == 0 or step == steps:
            trajectory.snapshots.append(current)
            trajectory.records.append(wave_record(current, alpha, beta, config.record_helicity, window))
            window.recut(current, alpha, beta)
    return trajectory
