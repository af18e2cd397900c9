"""
Electrostatics Package

Born's point-charge solution and the variational solver for collinear
point charges on an axisymmetric mesh.
"""

from electrostatics.born import (
    born_potential,
    born_central_value,
    born_field,
    born_field_energy,
    born_core_energy,
    defect_potential,
)
from electrostatics.mesh import GridConfig, build_axisymmetric_mesh
from electrostatics.solver import (
    PointCharge,
    SolverConfig,
    ElectrostaticSolution,
    solve_electrostatic,
    perturb_solution,
    lipschitz_gap,
    defect_field_sum,
    defect_potential_sum,
)
from electrostatics.analysis import (
    evaluate_A1,
    axial_field,
    remainder_at_charges,
    potential_at,
    charge_flux,
    convexity_uniqueness_check,
    energy_of_static_solution,
    static_field_energy,
    static_energy_moment,
    solution_table,
    solution_header,
)

__all__ = [
    'born_potential',
    'born_central_value',
    'born_field',
    'born_field_energy',
    'born_core_energy',
    'defect_potential',
    'GridConfig',
    'build_axisymmetric_mesh',
    'PointCharge',
    'SolverConfig',
    'ElectrostaticSolution',
    'solve_electrostatic',
    'perturb_solution',
    'lipschitz_gap',
    'defect_field_sum',
    'defect_potential_sum',
    'evaluate_A1',
    'axial_field',
    'remainder_at_charges',
    'potential_at',
    'charge_flux',
    'convexity_uniqueness_check',
    'energy_of_static_solution',
    'static_field_energy',
    'static_energy_moment',
    'solution_table',
    'solution_header',
]
