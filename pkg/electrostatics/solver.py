"""
Variational solver for the static Born-Infeld equation with point charges.

The displacement is written as D = sum_k z_k s_hat_k / |s - s_k|^2 + curl(psi e_phi / rho)
on the meridian half-plane, so div D = 4 pi sum_k z_k delta_k holds exactly and
the unknown is the stream function psi (piecewise linear, zero on the axis
and on the outer boundary). psi minimises the convex field energy

    W(psi) = integral (sqrt(1 + b4 |D|^2) - 1) / b4 dV,

whose Euler-Lagrange equation is curl E = 0 with E = D / sqrt(1 + b4 |D|^2).
The gradient is assembled from E minus the summed Born defect fields: that
field is curl free, so its exact contribution vanishes, and subtracting it
leaves only the smooth interaction part to the quadrature. A single charge
is then reproduced to rounding.

The potential A (grad A = -E) is recovered afterwards as Born defects plus
a weighted least-squares remainder u. Since E is computed from the forward
static law, |grad A| < beta**-2 holds at every quadrature point.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve

from config.settings import STATIC_MAX_ITERATIONS, STATIC_TOLERANCE
from electrostatics.born import defect_field, defect_potential
from electrostatics.mesh import AxisymmetricMesh, GridConfig, build_axisymmetric_mesh
from physics.errors import (
    ConfigurationError,
    DomainError,
    LipschitzBoundError,
    SolverConvergenceError,
    UnsupportedGeometryError,
    UsageError,
)

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass
class PointCharge:
    """A point charge z at ``position``; kappa -> 0 marks a frozen nucleus."""

    z: int
    position: np.ndarray
    kappa: float = 1.0

    def __post_init__(self):
        if int(self.z) != self.z or self.z == 0:
            raise UsageError(f"charge number must be a nonzero integer, got {self.z}")
        self.z = int(self.z)
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        if not np.all(np.isfinite(self.position)):
            raise UsageError("charge position must be finite")
        if not 0.0 <= self.kappa <= 1.0:
            raise UsageError(f"kappa must lie in [0, 1], got {self.kappa}")

    def to_dict(self) -> dict:
        return {'z': self.z, 'position': [float(x) for x in self.position], 'kappa': float(self.kappa)}


@dataclass
class SolverConfig:
    grid: GridConfig = field(default_factory=GridConfig)
    tolerance: float = STATIC_TOLERANCE
    max_iterations: int = STATIC_MAX_ITERATIONS
    armijo: float = 1e-4
    max_halvings: int = 40

    def validate(self):
        self.grid.validate()
        if not self.tolerance > 0:
            raise ConfigurationError("tolerance must be positive", path='solver.tolerance')
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be at least 1", path='solver.max_iterations')
        return self

    def to_dict(self) -> dict:
        return {
            'grid': self.grid.to_dict(),
            'tolerance': self.tolerance,
            'max_iterations': self.max_iterations,
        }


@dataclass
class ElectrostaticSolution:
    """
    Converged static field on an axisymmetric mesh.

    ``field_strength`` and ``displacement`` hold (rho, zeta) components at the
    mesh quadrature points; ``potential`` and ``remainder`` are nodal.
    """

    mesh: AxisymmetricMesh
    charges: List[PointCharge]
    beta: float
    origin: np.ndarray
    axis: np.ndarray
    charge_zeta: np.ndarray
    stream: np.ndarray
    field_strength: np.ndarray
    displacement: np.ndarray
    remainder: np.ndarray
    potential: np.ndarray
    residual: np.ndarray
    residual_history: List[float]
    iterations: int
    config: SolverConfig

    @property
    def charge_numbers(self) -> np.ndarray:
        return np.array([c.z for c in self.charges], dtype=float)

    @property
    def max_scaled_gradient(self) -> float:
        """max beta^2 |grad A| over the quadrature points."""
        if self.field_strength.size == 0:
            return 0.0
        return float(self.beta ** 2 * np.max(np.hypot(self.field_strength[:, 0], self.field_strength[:, 1])))

    @property
    def lipschitz_margin(self) -> float:
        """min of 1 - b4 |grad A|^2, evaluated as 1 / (1 + b4 |D|^2) without rounding to zero."""
        return float(np.min(lipschitz_gap(self.displacement, self.beta), initial=1.0))

    def to_meridian(self, points) -> np.ndarray:
        """Map 3D points to (rho, zeta) coordinates of this solution."""
        rel = np.atleast_2d(np.asarray(points, dtype=float)) - self.origin
        zeta = rel @ self.axis
        perp = rel - zeta[:, None] * self.axis
        return np.column_stack([np.sqrt(np.sum(perp ** 2, axis=1)), zeta])


def lipschitz_gap(D: np.ndarray, beta: float) -> np.ndarray:
    """1 - b4 |E|^2 per sample for E = D / sqrt(1 + b4 |D|^2)."""
    return 1.0 / (1.0 + beta ** 4 * (D[..., 0] ** 2 + D[..., 1] ** 2))


def _axis_frame(charges: Sequence[PointCharge]):
    """
    Origin, axis direction and axial coordinates of collinear charges.

    Raises:
        UnsupportedGeometryError: charges off a common line
        UsageError: coincident charges
    """
    if not charges:
        return np.zeros(3), np.array([0.0, 0.0, 1.0]), np.zeros(0)
    positions = np.array([c.position for c in charges])
    origin = positions[0].copy()
    rel = positions - origin
    dist = np.sqrt(np.sum(rel ** 2, axis=1))
    extent = float(dist.max())
    if extent == 0.0:
        if len(charges) > 1:
            raise UsageError("charge positions must be pairwise distinct")
        axis = np.array([0.0, 0.0, 1.0])
    else:
        axis = rel[int(np.argmax(dist))] / extent
    zeta = rel @ axis
    off_axis = np.sqrt(np.sum((rel - zeta[:, None] * axis) ** 2, axis=1))
    if np.any(off_axis > 1e-10 * max(extent, 1.0)):
        raise UnsupportedGeometryError(
            f"charges are not collinear (largest offset {float(off_axis.max()):.3e} from their common axis); only axisymmetric layouts are solved"
        )
    ordered = np.sort(zeta)
    if ordered.size > 1 and np.min(np.diff(ordered)) <= 1e-12 * max(extent, 1.0):
        raise UsageError("charge positions must be pairwise distinct")
    return origin, axis, zeta


def _coulomb_meridian(rho, zeta, charge_zeta, charge_z):
    D = np.zeros((rho.size, 2))
    for zk, z in zip(charge_zeta, charge_z):
        dz = zeta - zk
        r3 = (rho * rho + dz * dz) ** 1.5
        D[:, 0] += z * rho / r3
        D[:, 1] += z * dz / r3
    return D


def defect_field_sum(points, charge_zeta, charge_z, beta) -> np.ndarray:
    """Sum of Born defect fields at meridian points, (rho, zeta) components."""
    E = np.zeros((points.shape[0], 2))
    for zk, z in zip(charge_zeta, charge_z):
        E += defect_field(points, np.array([0.0, zk]), beta, int(z))
    return E


def defect_potential_sum(points, charge_zeta, charge_z, beta) -> np.ndarray:
    """Sum of Born defect potentials at meridian points."""
    A = np.zeros(points.shape[0])
    for zk, z in zip(charge_zeta, charge_z):
        r = np.hypot(points[:, 0], points[:, 1] - zk)
        A += defect_potential(r, beta, int(z))
    return A


class _StreamProblem:
    """
    Energy, gradient and Hessian of W(psi) restricted to the free nodes.

    The objective is W(psi) minus the linear functional psi -> integral
    E_ref . curl(psi e_phi / rho), whose exact value is zero for the curl-free
    reference field E_ref. Only the discrete quadrature sees it.
    """

    def __init__(self, mesh: AxisymmetricMesh, beta: float, coulomb: np.ndarray,
                 reference: np.ndarray):
        self.mesh = mesh
        self.b4 = beta ** 4
        self.coulomb = coulomb
        self.reference = reference
        q = mesh.quadrature
        self.tri = q.triangle
        self.rho = q.rho
        self.weight = q.weight
        n_tri = mesh.triangles.shape[0]
        rows = np.repeat(np.arange(n_tri), 3)
        cols = mesh.triangles.ravel()
        curl_rho = sparse.csr_matrix((-mesh.grads[:, 1, :].ravel(), (rows, cols)),
                                     shape=(n_tri, mesh.num_nodes))
        curl_zeta = sparse.csr_matrix((mesh.grads[:, 0, :].ravel(), (rows, cols)),
                                      shape=(n_tri, mesh.num_nodes))
        fixed = np.zeros(mesh.num_nodes, dtype=bool)
        fixed[mesh.axis_nodes] = True
        fixed[mesh.outer_nodes] = True
        self.free = np.flatnonzero(~fixed)
        self.curl_rho = curl_rho[:, self.free].tocsr()
        self.curl_zeta = curl_zeta[:, self.free].tocsr()
        self.n_tri = n_tri

    def curl(self, psi: np.ndarray) -> np.ndarray:
        """rho times the stream displacement at the quadrature points."""
        return np.column_stack([(self.curl_rho @ psi)[self.tri], (self.curl_zeta @ psi)[self.tri]])

    def displacement(self, psi: np.ndarray) -> np.ndarray:
        return self.coulomb + self.curl(psi) / self.rho[:, None]

    def energy(self, D: np.ndarray) -> float:
        d2 = D[:, 0] ** 2 + D[:, 1] ** 2
        density = d2 / (np.sqrt(1.0 + self.b4 * d2) + 1.0)
        return math.fsum(TWO_PI * self.rho * self.weight * density)

    def energy_change(self, D: np.ndarray, root: np.ndarray, curl_step: np.ndarray):
        """
        Objective change for D -> D + curl_step / rho, computed from the
        increment so it stays accurate when the change is far below W.
        """
        dD = curl_step / self.rho[:, None]
        D_new = D + dD
        root_new = np.sqrt(1.0 + self.b4 * (D_new[:, 0] ** 2 + D_new[:, 1] ** 2))
        # (sqrt(1 + b4 a) - sqrt(1 + b4 b)) / b4 = (a - b) / (sqrt(1 + b4 a) + sqrt(1 + b4 b))
        d2_change = np.sum(dD * (D_new + D), axis=1)
        quadratic = TWO_PI * self.rho * self.weight * d2_change / (root_new + root)
        linear = TWO_PI * self.weight * np.sum(self.reference * curl_step, axis=1)
        return math.fsum(np.concatenate([quadratic, -linear])), D_new

    def field(self, D: np.ndarray):
        d2 = D[:, 0] ** 2 + D[:, 1] ** 2
        root = np.sqrt(1.0 + self.b4 * d2)
        return D / root[:, None], root

    def gradient(self, E: np.ndarray) -> np.ndarray:
        excess = E - self.reference
        g_rho = np.bincount(self.tri, TWO_PI * self.weight * excess[:, 0], minlength=self.n_tri)
        g_zeta = np.bincount(self.tri, TWO_PI * self.weight * excess[:, 1], minlength=self.n_tri)
        return self.curl_rho.T @ g_rho + self.curl_zeta.T @ g_zeta

    def hessian(self, D: np.ndarray, root: np.ndarray):
        c = TWO_PI * self.weight / self.rho
        r3 = root ** 3
        k_rr = c * (1.0 / root - self.b4 * D[:, 0] ** 2 / r3)
        k_rz = c * (-self.b4 * D[:, 0] * D[:, 1] / r3)
        k_zz = c * (1.0 / root - self.b4 * D[:, 1] ** 2 / r3)
        s_rr = sparse.diags(np.bincount(self.tri, k_rr, minlength=self.n_tri))
        s_rz = sparse.diags(np.bincount(self.tri, k_rz, minlength=self.n_tri))
        s_zz = sparse.diags(np.bincount(self.tri, k_zz, minlength=self.n_tri))
        Cr, Cz = self.curl_rho, self.curl_zeta
        H = Cr.T @ s_rr @ Cr + Cr.T @ s_rz @ Cz + Cz.T @ s_rz @ Cr + Cz.T @ s_zz @ Cz
        return H.tocsc()


def _project_remainder(mesh: AxisymmetricMesh, target: np.ndarray) -> np.ndarray:
    """
    Weighted least-squares fit of grad u to ``target`` (rho-weighted, u = 0 outside).

    ``target`` holds (rho, zeta) components at the quadrature points.
    """
    q = mesh.quadrature
    n_tri = mesh.triangles.shape[0]
    w = TWO_PI * q.rho * q.weight
    mass = np.bincount(q.triangle, w, minlength=n_tri)
    f_rho = np.bincount(q.triangle, w * target[:, 0], minlength=n_tri)
    f_zeta = np.bincount(q.triangle, w * target[:, 1], minlength=n_tri)
    G = mesh.grads
    rows, cols, vals = [], [], []
    rhs = np.zeros(mesh.num_nodes)
    for a in range(3):
        np.add.at(rhs, mesh.triangles[:, a], f_rho * G[:, 0, a] + f_zeta * G[:, 1, a])
        for b in range(3):
            rows.append(mesh.triangles[:, a])
            cols.append(mesh.triangles[:, b])
            vals.append(mass * (G[:, 0, a] * G[:, 0, b] + G[:, 1, a] * G[:, 1, b]))
    K = sparse.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                          shape=(mesh.num_nodes, mesh.num_nodes))
    fixed = np.zeros(mesh.num_nodes, dtype=bool)
    fixed[mesh.outer_nodes] = True
    free = np.flatnonzero(~fixed)
    u = np.zeros(mesh.num_nodes)
    u[free] = spsolve(K[free][:, free].tocsc(), rhs[free])
    return u


ROUNDING_FLOOR = 1e-12


def _newton(problem: _StreamProblem, psi: np.ndarray, config: SolverConfig):
    """
    Damped Newton on the stream function.

    Convergence is declared when the Newton step's energy norm,
    sqrt(decrement / W0), drops below the tolerance; that last step is still
    applied. W0 is the field energy of the bare Coulomb displacement.
    """
    history: List[float] = []
    D = problem.displacement(psi)
    scale = max(problem.energy(problem.coulomb), np.finfo(float).tiny)
    W = problem.energy(D)
    for iteration in range(config.max_iterations):
        E, root = problem.field(D)
        g = problem.gradient(E)
        g_norm = float(np.max(np.abs(g))) if g.size else 0.0
        history.append(g_norm)
        if g_norm == 0.0:
            return psi, D, history, iteration
        step = spsolve(problem.hessian(D, root), -g)
        decrement = max(float(-g @ step), 0.0)
        residual = math.sqrt(decrement / scale)
        logger.debug("Newton %d: W=%.15e |g|=%.3e residual=%.3e", iteration, W, g_norm, residual)
        curl_step = problem.curl(step)
        if residual <= config.tolerance:
            _, D = problem.energy_change(D, root, curl_step)
            return psi + step, D, history, iteration

        t = 1.0
        for _ in range(config.max_halvings):
            change, D_trial = problem.energy_change(D, root, t * curl_step)
            if np.isfinite(change) and change <= -config.armijo * t * decrement:
                break
            t *= 0.5
        else:
            if residual <= ROUNDING_FLOOR:
                logger.warning(f"Newton stopped at the rounding floor, residual {residual:.3e}")
                return psi, D, history, iteration
            raise SolverConvergenceError(
                f"line search stalled at iteration {iteration} (residual {residual:.3e})",
                residual_history=history,
            )
        psi, D, W = psi + t * step, D_trial, W + change
        if t < 1.0:
            logger.debug("Newton %d damped to t=%.3e", iteration, t)

    raise SolverConvergenceError(
        f"no convergence after {config.max_iterations} Newton iterations",
        residual_history=history,
    )


def solve_electrostatic(charges: Sequence[PointCharge], beta: float,
                        config: Optional[SolverConfig] = None,
                        initial_stream: Optional[np.ndarray] = None) -> ElectrostaticSolution:
    """
    Solve the static Born-Infeld equation for collinear point charges.

    Args:
        charges: Point charges (collinear, pairwise distinct)
        beta (float): Aether constant
        config (SolverConfig): Grid and Newton controls
        initial_stream (np.ndarray, optional): Nodal initial guess for psi;
            values on the axis and outer boundary are ignored

    Returns:
        ElectrostaticSolution: Converged solution

    Raises:
        SolverConvergenceError: Newton iteration did not converge
        UnsupportedGeometryError: Non-collinear charges
        UsageError: Coincident charges or a malformed initial stream
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    config = (config or SolverConfig()).validate()
    charges = list(charges)
    origin, axis, charge_zeta = _axis_frame(charges)
    charge_z = np.array([c.z for c in charges], dtype=float)
    mesh = build_axisymmetric_mesh(charge_zeta, beta, config.grid)
    q = mesh.quadrature

    coulomb = _coulomb_meridian(q.rho, q.zeta, charge_zeta, charge_z)
    reference = defect_field_sum(q.points, charge_zeta, charge_z, beta)
    problem = _StreamProblem(mesh, beta, coulomb, reference)
    psi0 = np.zeros(problem.free.size)
    if initial_stream is not None:
        initial_stream = np.asarray(initial_stream, dtype=float)
        if initial_stream.shape != (mesh.num_nodes,):
            raise UsageError(f"initial_stream must have {mesh.num_nodes} nodal values")
        psi0 = initial_stream[problem.free].copy()

    logger.info(f"Solving {len(charges)} charges, beta={beta:.6g} on {mesh.descriptor()}")
    psi_free, D, history, iterations = _newton(problem, psi0, config)
    E, _ = problem.field(D)

    gap = lipschitz_gap(D, beta)
    if gap.size and not np.all(gap > 0.0):
        raise LipschitzBoundError(float(beta ** 2 * np.max(np.hypot(E[:, 0], E[:, 1]))))

    stream = np.zeros(mesh.num_nodes)
    stream[problem.free] = psi_free
    residual = np.zeros(mesh.num_nodes)
    residual[problem.free] = np.abs(problem.gradient(E))

    remainder = _project_remainder(mesh, -(E - reference))
    potential = remainder + defect_potential_sum(mesh.nodes, charge_zeta, charge_z, beta)
    margin = float(np.min(gap)) if gap.size else 1.0
    logger.info(f"Converged after {iterations} Newton iterations, min 1 - b4|E|^2 = {margin:.3e}")
    return ElectrostaticSolution(
        mesh=mesh,
        charges=charges,
        beta=beta,
        origin=origin,
        axis=axis,
        charge_zeta=charge_zeta,
        stream=stream,
        field_strength=E,
        displacement=D,
        remainder=remainder,
        potential=potential,
        residual=residual,
        residual_history=history,
        iterations=iterations,
        config=config,
    )


def perturb_solution(sol: ElectrostaticSolution,
                     bump: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> ElectrostaticSolution:
    """
    Add a smooth function to A while keeping the charge data.

    Args:
        sol: Reference solution
        bump: Function of (rho, zeta) arrays returning nodal increments

    Returns:
        ElectrostaticSolution: A + bump with updated field strengths

    Raises:
        LipschitzBoundError: if the perturbed gradient leaves the admissible set
    """
    mesh = sol.mesh
    nodes = mesh.nodes
    delta = np.asarray(bump(nodes[:, 0], nodes[:, 1]), dtype=float)
    grad = np.einsum('tdk,tk->td', mesh.grads, delta[mesh.triangles])[mesh.quadrature.triangle]
    E = sol.field_strength - grad
    # 1 - b4 |E + dE|^2 from the stored gap, so saturated points untouched by the bump keep D
    b4 = sol.beta ** 4
    gap = lipschitz_gap(sol.displacement, sol.beta) \
        + b4 * np.sum(grad * (2.0 * sol.field_strength - grad), axis=1)
    if not np.all(gap > 0.0):
        raise LipschitzBoundError(float(np.sqrt(max(0.0, 1.0 - float(np.min(gap))))))
    moved = np.any(grad != 0.0, axis=1)
    D = sol.displacement.copy()
    D[moved] = E[moved] / np.sqrt(gap[moved])[:, None]
    return replace(
        sol,
        field_strength=E,
        displacement=D,
        remainder=sol.remainder + delta,
        potential=sol.potential + delta,
    )
