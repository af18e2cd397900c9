"""
Single-electron Hamilton-Jacobi guidance around a frozen nucleus.
"""

from guidance.a1_profile import A1Profile, electron_nucleus_pair, solve_a1
from guidance.comparison import ReductionReport, reduction_comparison
from guidance.guiding import ParticleTrack, guide
from guidance.hamilton_jacobi import (
    HJConfig,
    HJTrajectory,
    RadialHJState,
    build_radial_state,
    gauge_shift,
    hj_evolve,
    kinetic,
    nucleus_infall_state,
    numerical_hamiltonian,
    radial_grid,
    static_electron_state,
)
from guidance.oracle import (
    CoulombField,
    ExternalField,
    FieldSum,
    UniformField,
    circular_orbit_momentum,
    coulomb_energy,
    test_particle_oracle,
)
