"""
Monitoring Package

Conserved-quantity diagnostics for field and particle runs:
- Field and total functionals (charge, energy, momenta, energy moment)
- Periodic field helicities
- Drift reports over stored records
"""

from monitoring.conservation import (
    ConservedRecord,
    ParticleData,
    SurfaceQuadrature,
    field_functionals,
    total_functionals,
    static_record,
    RECORD_COLUMNS,
)
from monitoring.helicity import helicity_1d, cross_helicity_1d, periodic_vector_potential
from monitoring.drift import DriftReport, drift_report, ConservationMonitor

__all__ = [
    'ConservedRecord',
    'ParticleData',
    'SurfaceQuadrature',
    'field_functionals',
    'total_functionals',
    'static_record',
    'RECORD_COLUMNS',
    'helicity_1d',
    'cross_helicity_1d',
    'periodic_vector_potential',
    'DriftReport',
    'drift_report',
    'ConservationMonitor',
]
