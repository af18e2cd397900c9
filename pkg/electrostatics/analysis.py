"""
Post-processing of static solutions: point values of A at the charges,
interpolation, Gauss flux, the convexity identity and the field energy.
"""

import logging
import math
from typing import Dict, Optional

import numpy as np
import pandas as pd
from scipy import integrate
from scipy.interpolate import RegularGridInterpolator

from electrostatics.born import born_core_energy, defect_potential
from electrostatics.solver import ElectrostaticSolution, TWO_PI, defect_field_sum, defect_potential_sum
from physics.errors import UsageError

logger = logging.getLogger(__name__)


def axial_field(sol: ElectrostaticSolution, zeta) -> np.ndarray:
    """
    E_zeta on the symmetry axis.

    The stream part of D_zeta tends to 2a on the axis for psi = a rho^2 + b rho^4,
    fitted from the first two node columns off the axis.
    """
    zeta = np.asarray(zeta, dtype=float)
    mesh = sol.mesh
    psi = sol.stream.reshape(mesh.shape)
    r1, r2 = mesh.rho[1], mesh.rho[2]
    p1 = np.interp(zeta, mesh.zeta, psi[1])
    p2 = np.interp(zeta, mesh.zeta, psi[2])
    a = (p1 * r2 ** 4 - p2 * r1 ** 4) / (r1 ** 2 * r2 ** 2 * (r2 ** 2 - r1 ** 2))
    D = 2.0 * a
    for zk, charge in zip(sol.charge_zeta, sol.charges):
        dz = zeta - zk
        D = D + charge.z * np.sign(dz) / dz ** 2
    return D / np.sqrt(1.0 + sol.beta ** 4 * D ** 2)


def _axial_remainder_slope(zeta: float, sol: ElectrostaticSolution) -> float:
    """du/dzeta on the axis: the defect field minus the solution field."""
    point = np.array([[0.0, zeta]])
    defect = defect_field_sum(point, sol.charge_zeta, sol.charge_numbers, sol.beta)[0, 1]
    return float(defect - axial_field(sol, zeta))


def remainder_at_charges(sol: ElectrostaticSolution) -> np.ndarray:
    """
    Smooth remainder u at every charge.

    Differences between neighbouring charges come from integrating du/dzeta
    along the axis segment joining them; the common level is the mean offset
    of the nodal remainder values at the charge nodes.
    """
    n = len(sol.charges)
    nodal = np.array([
        sol.remainder[sol.mesh.node_index(0, int(np.argmin(np.abs(sol.mesh.zeta - zk))))]
        for zk in sol.charge_zeta
    ])
    order = np.argsort(sol.charge_zeta)
    offsets = np.zeros(n)
    for left, right in zip(order[:-1], order[1:]):
        lo, hi = sol.charge_zeta[left], sol.charge_zeta[right]
        nodes = sol.mesh.zeta[(sol.mesh.zeta > lo) & (sol.mesh.zeta < hi)]
        piece, _ = integrate.quad(_axial_remainder_slope, lo, hi, args=(sol,),
                                  points=nodes if nodes.size else None,
                                  limit=4 * nodes.size + 200, epsabs=1e-14, epsrel=1e-12)
        offsets[right] = offsets[left] + piece
    return offsets + np.mean(nodal - offsets)


def evaluate_A1(sol: ElectrostaticSolution, k: int) -> float:
    """
    Value of A at the k-th charge.

    The smooth remainder at the charge (see ``remainder_at_charges``) plus
    every defect's potential there, the k-th one with its finite central value.

    Args:
        sol (ElectrostaticSolution): Converged solution
        k (int): Charge index

    Returns:
        float: A(s_k)
    """
    if not 0 <= k < len(sol.charges):
        raise UsageError(f"charge index {k} out of range for {len(sol.charges)} charges")
    zk = sol.charge_zeta[k]
    value = remainder_at_charges(sol)[k]
    for zj, charge in zip(sol.charge_zeta, sol.charges):
        value += defect_potential(abs(zk - zj), sol.beta, charge.z)
    return float(value)


def _remainder_interpolator(sol: ElectrostaticSolution, values: np.ndarray) -> RegularGridInterpolator:
    mesh = sol.mesh
    return RegularGridInterpolator((mesh.rho, mesh.zeta), values.reshape(mesh.shape))


def potential_at(sol: ElectrostaticSolution, points) -> np.ndarray:
    """
    Potential A at arbitrary 3D points inside the mesh.

    Args:
        sol (ElectrostaticSolution): Converged solution
        points: Array of shape (3,) or (n, 3)

    Returns:
        np.ndarray: A values, shape (n,)
    """
    meridian = sol.to_meridian(points)
    mesh = sol.mesh
    inside = ((meridian[:, 0] <= mesh.rho[-1]) & (meridian[:, 1] >= mesh.zeta[0])
              & (meridian[:, 1] <= mesh.zeta[-1]))
    if not np.all(inside):
        raise UsageError("potential requested outside the computational domain")
    u = _remainder_interpolator(sol, sol.remainder)(meridian)
    return u + defect_potential_sum(meridian, sol.charge_zeta, sol.charge_numbers, sol.beta)


def charge_flux(sol: ElectrostaticSolution, radius: float, center_zeta: float = 0.0) -> float:
    """
    (1/4 pi) times the flux of D through a sphere centred on the symmetry axis.

    The Coulomb part is integrated by adaptive quadrature over the polar
    angle; the divergence-free part contributes 2 pi times the jump of the
    stream function between the two poles.

    Args:
        sol (ElectrostaticSolution): Converged solution
        radius (float): Sphere radius
        center_zeta (float): Axial coordinate of the sphere centre

    Returns:
        float: Enclosed charge estimate
    """
    mesh = sol.mesh
    if not radius > 0:
        raise UsageError("flux sphere radius must be positive")
    if (radius > mesh.rho[-1] or center_zeta - radius < mesh.zeta[0]
            or center_zeta + radius > mesh.zeta[-1]):
        raise UsageError("flux sphere leaves the computational domain")

    total = 0.0
    for zk, charge in zip(sol.charge_zeta, sol.charges):
        a = zk - center_zeta

        def integrand(theta, a=a):
            cos_t = math.cos(theta)
            dist2 = radius * radius + a * a - 2.0 * a * radius * cos_t
            return 0.5 * (radius - a * cos_t) * radius ** 2 * math.sin(theta) / dist2 ** 1.5

        value, _ = integrate.quad(integrand, 0.0, math.pi, limit=400, epsabs=1e-13, epsrel=1e-12)
        total += charge.z * value

    psi = _remainder_interpolator(sol, sol.stream)
    poles = np.array([[0.0, center_zeta + radius], [0.0, center_zeta - radius]])
    top, bottom = psi(poles)
    # (1/4 pi) * 2 pi * (psi_top - psi_bottom), orientation of the outward normal
    total += 0.5 * (bottom - top)
    return float(total)


def convexity_uniqueness_check(sol0: ElectrostaticSolution, sol1: ElectrostaticSolution) -> float:
    """
    Integral of grad(A1 - A0) . (F(grad A1) - F(grad A0)), F(g) = g / sqrt(1 - b4 |g|^2).

    Non-negative by convexity and zero only for identical gradients.

    Raises:
        UsageError: if the two solutions do not share charges, beta and mesh
    """
    same_charges = (
        len(sol0.charges) == len(sol1.charges)
        and all(c0.z == c1.z and np.array_equal(c0.position, c1.position)
                for c0, c1 in zip(sol0.charges, sol1.charges))
    )
    if not same_charges:
        raise UsageError("convexity check needs identical charge data")
    if sol0.beta != sol1.beta:
        raise UsageError("convexity check needs identical beta")
    if not (np.array_equal(sol0.mesh.rho, sol1.mesh.rho) and np.array_equal(sol0.mesh.zeta, sol1.mesh.zeta)):
        raise UsageError("convexity check needs a shared mesh")

    q = sol0.mesh.quadrature
    pairing = np.sum((sol1.field_strength - sol0.field_strength)
                     * (sol1.displacement - sol0.displacement), axis=1)
    return max(0.0, math.fsum(TWO_PI * q.rho * q.weight * pairing))


def _inverse_boundary_distance_integral(radius: float, half_height: float) -> float:
    """Integral over the unit sphere of 1 / r_b(direction) for a cylinder."""
    split = math.atan2(radius, half_height)

    def integrand(theta):
        s, c = math.sin(theta), abs(math.cos(theta))
        r_side = radius / s if s > 0 else math.inf
        r_cap = half_height / c if c > 0 else math.inf
        return s / min(r_side, r_cap)

    value, _ = integrate.quad(integrand, 0.0, math.pi, points=[split, math.pi - split], limit=200)
    return TWO_PI * value


def _interaction_energy_points(sol: ElectrostaticSolution, alpha: float) -> np.ndarray:
    """Per quadrature point: field energy density minus single-defect densities, times volume."""
    b4 = sol.beta ** 4
    q = sol.mesh.quadrature

    def excess(d2):
        # (sqrt(1 + b4 d2) - 1) / b4 without cancellation
        return d2 / (np.sqrt(1.0 + b4 * d2) + 1.0)

    D = sol.displacement
    density = excess(D[:, 0] ** 2 + D[:, 1] ** 2)
    for zk, charge in zip(sol.charge_zeta, sol.charges):
        r2 = q.rho ** 2 + (q.zeta - zk) ** 2
        density = density - excess(charge.z ** 2 / r2 ** 2)
    return alpha / (4.0 * np.pi) * TWO_PI * q.rho * q.weight * density


def static_field_energy(sol: ElectrostaticSolution, alpha: float) -> float:
    """
    Field energy of a static solution.

    The energy is split into each defect's whole-space Born self-energy,
    known in closed form, and the quadrature of the density minus the sum of
    the single-defect densities. The monopole cross term outside the mesh is
    added analytically.
    """
    if not sol.charges:
        return 0.0
    mesh = sol.mesh
    interaction = math.fsum(_interaction_energy_points(sol, alpha))
    self_energy = math.fsum(born_core_energy(np.inf, alpha, sol.beta, c.z) for c in sol.charges)
    total_charge = float(sum(c.z for c in sol.charges))
    squares = float(sum(c.z ** 2 for c in sol.charges))
    half_height = 0.5 * (mesh.zeta[-1] - mesh.zeta[0])
    tail = alpha / (8.0 * np.pi) * (total_charge ** 2 - squares) * \
        _inverse_boundary_distance_integral(mesh.rho[-1], half_height)
    logger.debug(f"Energy parts: self={self_energy:.12e} interaction={interaction:.12e} tail={tail:.12e}")
    return self_energy + interaction + tail


def static_energy_moment(sol: ElectrostaticSolution, alpha: float) -> np.ndarray:
    """First moment of the field energy density as a 3D vector (inside the mesh)."""
    if not sol.charges:
        return np.zeros(3)
    q = sol.mesh.quadrature
    parts = _interaction_energy_points(sol, alpha)
    axial = [parts * q.zeta]
    total = [parts]
    for zk, charge in zip(sol.charge_zeta, sol.charges):
        self_energy = born_core_energy(np.inf, alpha, sol.beta, charge.z)
        axial.append(np.array([self_energy * zk]))
        total.append(np.array([self_energy]))
    m_axial = math.fsum(np.concatenate(axial))
    energy = math.fsum(np.concatenate(total))
    return energy * sol.origin + m_axial * sol.axis


def energy_of_static_solution(sol: ElectrostaticSolution, alpha: float) -> float:
    """
    Total static energy N + field energy, one rest-energy unit per charge.

    Args:
        sol (ElectrostaticSolution): Converged solution
        alpha (float): Fine structure constant

    Returns:
        float: N + field energy
    """
    return len(sol.charges) + static_field_energy(sol, alpha)


def nodal_gradient_norm(sol: ElectrostaticSolution) -> np.ndarray:
    """|grad A| per node, the area-weighted mean over adjacent triangles."""
    mesh = sol.mesh
    q = mesh.quadrature
    n_tri = mesh.triangles.shape[0]
    norm = np.hypot(sol.field_strength[:, 0], sol.field_strength[:, 1])
    per_tri = np.bincount(q.triangle, q.weight * norm, minlength=n_tri) / mesh.areas
    num = np.zeros(mesh.num_nodes)
    den = np.zeros(mesh.num_nodes)
    for a in range(3):
        np.add.at(num, mesh.triangles[:, a], mesh.areas * per_tri)
        np.add.at(den, mesh.triangles[:, a], mesh.areas)
    return num / den


def solution_table(sol: ElectrostaticSolution) -> pd.DataFrame:
    """Grid dump: rho, zeta, A, |grad A| and the Newton residual per node."""
    nodes = sol.mesh.nodes
    return pd.DataFrame({
        'rho': nodes[:, 0],
        'zeta': nodes[:, 1],
        'A': sol.potential,
        'grad_A': nodal_gradient_norm(sol),
        'residual': sol.residual,
    })


def solution_header(sol: ElectrostaticSolution, alpha: Optional[float] = None) -> Dict:
    header = {
        'beta': sol.beta,
        'charges': [c.to_dict() for c in sol.charges],
        'axis_origin': [float(x) for x in sol.origin],
        'axis_direction': [float(x) for x in sol.axis],
        'grid': sol.mesh.descriptor(),
        'solver': sol.config.to_dict(),
        'iterations': sol.iterations,
        'final_residual': sol.residual_history[-1] if sol.residual_history else 0.0,
        'max_scaled_gradient': sol.max_scaled_gradient,
    }
    if alpha is not None:
        header['alpha'] = alpha
    return header
