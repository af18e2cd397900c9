"""
Conserved functionals of the field and of field plus particles.

All reductions use compensated summation (math.fsum) so that long runs can
be compared at the 1e-6 level without summation-order noise.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from electrostatics.analysis import charge_flux, static_energy_moment, static_field_energy
from electrostatics.solver import ElectrostaticSolution
from physics.aether import energy_density
from physics.errors import DomainError

logger = logging.getLogger(__name__)

RECORD_COLUMNS = ['time', 'Q', 'E', 'Px', 'Py', 'Pz', 'Jx', 'Jy', 'Jz',
                  'Mx', 'My', 'Mz', 'Y_B', 'Y_D', 'X']


@dataclass
class ConservedRecord:
    """Snapshot of the conserved quantities at one time."""

    time: float
    Q: float
    E_total: float
    P: np.ndarray
    J: np.ndarray
    M: np.ndarray
    Y_B: Optional[float] = None
    Y_D: Optional[float] = None
    X: Optional[float] = None

    def __post_init__(self):
        self.P = np.asarray(self.P, dtype=float).reshape(3)
        self.J = np.asarray(self.J, dtype=float).reshape(3)
        self.M = np.asarray(self.M, dtype=float).reshape(3)
        values = [self.Q, self.E_total, *self.P, *self.J, *self.M]
        values += [v for v in (self.Y_B, self.Y_D, self.X) if v is not None]
        if not all(np.isfinite(values)):
            raise DomainError(f"non-finite conserved quantity at t={self.time}")

    @property
    def Y(self) -> Optional[float]:
        """Electric plus magnetic helicity, when both are defined."""
        if self.Y_B is None or self.Y_D is None:
            return None
        return self.Y_B + self.Y_D

    def to_row(self) -> Dict[str, float]:
        row = {'time': self.time, 'Q': self.Q, 'E': self.E_total}
        for name, vec in (('P', self.P), ('J', self.J), ('M', self.M)):
            for axis, value in zip('xyz', vec):
                row[f'{name}{axis}'] = float(value)
        nan = float('nan')
        row['Y_B'] = nan if self.Y_B is None else self.Y_B
        row['Y_D'] = nan if self.Y_D is None else self.Y_D
        row['X'] = nan if self.X is None else self.X
        return row


@dataclass
class SurfaceQuadrature:
    """Points, outward unit normals and area weights of a closed surface."""

    points: np.ndarray
    normals: np.ndarray
    areas: np.ndarray


@dataclass
class ParticleData:
    """
    One point charge for the total functionals.

    ``kinetic`` is grad_k Phi - z_k alpha A_k evaluated at the actual position.
    """

    z: int
    position: np.ndarray
    kinetic: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.kinetic = np.asarray(self.kinetic, dtype=float).reshape(3)


def _vsum(values: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(values[:, i]) for i in range(values.shape[1])])


def field_functionals(B, D, coords, weights, alpha: float, beta: float, time: float = 0.0,
                      surface: Optional[SurfaceQuadrature] = None,
                      surface_D: Optional[np.ndarray] = None) -> ConservedRecord:
    """
    Field charge, energy, momentum, angular momentum and energy moment.

    Args:
        B, D: Field samples, shape (n, 3)
        coords: Sample positions, shape (n, 3)
        weights: Quadrature weights (cell volumes), shape (n,)
        alpha (float): Fine structure constant
        beta (float): Aether constant
        time (float): Snapshot time
        surface (SurfaceQuadrature, optional): Closed surface for the charge flux
        surface_D (np.ndarray, optional): D sampled at the surface points

    Returns:
        ConservedRecord: Field-only functionals (helicities unset)
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    D = np.atleast_2d(np.asarray(D, dtype=float))
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    w = np.asarray(weights, dtype=float)

    eps = energy_density(B, D, alpha, beta) * w
    energy = math.fsum(eps)
    pdens = alpha / (4.0 * np.pi) * np.cross(D, B) * w[:, None]
    momentum = _vsum(pdens)
    angular = _vsum(np.cross(coords, pdens))
    moment = _vsum(coords * eps[:, None])

    charge = 0.0
    if surface is not None:
        flux = np.einsum('ij,ij->i', np.asarray(surface_D, dtype=float), surface.normals)
        charge = math.fsum(flux * surface.areas) / (4.0 * np.pi)
    return ConservedRecord(time=time, Q=charge, E_total=energy, P=momentum, J=angular, M=moment)


def total_functionals(field_record: ConservedRecord, particles: Sequence[ParticleData],
                      alpha: float, subtract_rest: bool = False) -> ConservedRecord:
    """
    Add the particle terms to a field record.

    Each particle contributes sqrt(1 + |pi|^2) to the energy, pi to the
    momentum, q x pi to the angular momentum and sqrt(1 + |pi|^2) q to the
    energy moment, where pi = grad Phi - z alpha A at the particle position q.

    Args:
        field_record (ConservedRecord): Field functionals
        particles: Particle data
        alpha (float): Fine structure constant (kept for signature symmetry
            with the field functionals; the kinetic samples already include it)
        subtract_rest (bool): Use sqrt(1 + |pi|^2) - 1 per particle, which
            normalises a particle at rest to zero kinetic energy

    Returns:
        ConservedRecord: Totals; charge and helicities are carried over
    """
    energy = [field_record.E_total]
    momentum = [field_record.P]
    angular = [field_record.J]
    moment = [field_record.M]
    for particle in particles:
        gamma = math.sqrt(1.0 + float(particle.kinetic @ particle.kinetic))
        if subtract_rest:
            gamma -= 1.0
        energy.append(gamma)
        momentum.append(particle.kinetic)
        angular.append(np.cross(particle.position, particle.kinetic))
        moment.append(gamma * particle.position)
    return ConservedRecord(
        time=field_record.time,
        Q=field_record.Q,
        E_total=math.fsum(energy),
        P=_vsum(np.array(momentum)),
        J=_vsum(np.array(angular)),
        M=_vsum(np.array(moment)),
        Y_B=field_record.Y_B,
        Y_D=field_record.Y_D,
        X=field_record.X,
    )


def records_to_rows(records: Sequence[ConservedRecord]) -> List[Dict[str, float]]:
    return [r.to_row() for r in records]


def static_record(sol: ElectrostaticSolution, alpha: float, flux_radius: Optional[float] = None) -> ConservedRecord:
    """
    Field functionals of an electrostatic solution.

    B vanishes, so momentum and angular momentum are zero; the charge is the
    Gauss flux through a sphere around the charge cluster.

    Args:
        sol (ElectrostaticSolution): Converged solution
        alpha (float): Fine structure constant
        flux_radius (float, optional): Flux sphere radius, half the mesh
            radius by default

    Returns:
        ConservedRecord: Static record at t = 0
    """
    mesh = sol.mesh
    radius = flux_radius if flux_radius is not None else 0.5 * mesh.radius
    charge = charge_flux(sol, radius, center_zeta=mesh.zeta_center)
    return ConservedRecord(
        time=0.0,
        Q=charge,
        E_total=static_field_energy(sol, alpha),
        P=np.zeros(3),
        J=np.zeros(3),
        M=static_energy_moment(sol, alpha),
    )
