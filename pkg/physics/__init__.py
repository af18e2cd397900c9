"""
Physics Package

Dimensionless electron units, the universal constants and the pointwise
Born-Infeld constitutive laws shared by every solver package.
"""

from physics.errors import (
    MBIError,
    ConfigurationError,
    UsageError,
    UnsupportedGeometryError,
    DomainError,
    InadmissibleStateError,
    LipschitzBoundError,
    SolverConvergenceError,
    NumericalAbort,
    HamiltonJacobiBreakdown,
)
from physics.constants import UniversalConstants, euler_beta, born_beta, born_ratio

__all__ = [
    'MBIError',
    'ConfigurationError',
    'UsageError',
    'UnsupportedGeometryError',
    'DomainError',
    'InadmissibleStateError',
    'LipschitzBoundError',
    'SolverConvergenceError',
    'NumericalAbort',
    'HamiltonJacobiBreakdown',
    'UniversalConstants',
    'euler_beta',
    'born_beta',
    'born_ratio',
]
