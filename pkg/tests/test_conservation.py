"""Tests for conserved functionals, helicities and drift reports"""

import logging

import numpy as np
import pytest

from electrostatics import GridConfig, PointCharge, SolverConfig, solve_electrostatic
from monitoring import (
    ConservationMonitor,
    ConservedRecord,
    ParticleData,
    drift_report,
    field_functionals,
    helicity_1d,
    periodic_vector_potential,
    static_record,
    total_functionals,
)
from physics.errors import DomainError, UsageError
from waves import PulseProfile, SchemeConfig, evolve, make_traveling_solution

L = 20.0


def _record(t, energy, p=(0.0, 0.0, 0.0), m=(0.0, 0.0, 0.0)):
    return ConservedRecord(time=t, Q=0.0, E_total=energy, P=p, J=np.zeros(3), M=m)


def test_helicity_of_circular_field():
    n = 128
    a = 0.7
    k = 2.0 * np.pi * 2 / L
    z = (np.arange(n) + 0.5) * L / n
    value = helicity_1d(a * np.cos(k * z), a * np.sin(k * z), L)
    assert value == pytest.approx(-a ** 2 * L / (2.0 * k), rel=1e-12)


def test_vector_potential_requires_zero_mean():
    z = np.linspace(0.0, L, 64, endpoint=False)
    with pytest.raises(DomainError):
        periodic_vector_potential(1.0 + np.cos(z), np.zeros(64), L)


def test_helicity_conserved_on_circular_run():
    k = 2.0 * np.pi * 3 / L
    profile = PulseProfile(shape='cosine', polarization='circular', wavenumber=k, amplitude=0.4)
    initial = make_traveling_solution(profile, 0.0, L, 256)
    trajectory = evolve(initial, 1.0, L, SchemeConfig(snapshot_every=50))
    report = drift_report(trajectory.records)
    assert 'Y' in report.drifts
    assert report.drifts['Y'] < 1e-6
    assert report.within(1e-6, ['E', 'Y'])


def test_boost_residual_constant_for_traveling_pulse():
    profile = PulseProfile(center=8.0, width=2.0, amplitude=0.5)
    initial = make_traveling_solution(profile, 0.0, L, 512)
    trajectory = evolve(initial, 1.0, 4.0, SchemeConfig(snapshot_every=20, record_helicity=False))
    report = drift_report(trajectory.records)
    assert report.boost_drift < 1e-6
    # the energy centroid itself moves at unit speed
    first, last = trajectory.records[0], trajectory.records[-1]
    shift = (last.M[2] / last.E_total) - (first.M[2] / first.E_total)
    assert shift == pytest.approx(4.0, rel=1e-4)


def test_field_functionals_of_crossed_fields():
    alpha = 0.02
    B = np.array([[1.0, 0.0, 0.0]])
    D = np.array([[0.0, 1.0, 0.0]])
    coords = np.array([[0.0, 0.0, 2.0]])
    record = field_functionals(B, D, coords, [0.5], alpha, beta=0.0)
    np.testing.assert_allclose(record.P, [0.0, 0.0, -0.5 * alpha / (4.0 * np.pi)])
    assert record.E_total == pytest.approx(0.5 * alpha / (8.0 * np.pi) * 2.0)
    # momentum along the position vector carries no angular momentum
    np.testing.assert_allclose(record.J, np.zeros(3), atol=1e-18)


def test_total_functionals_add_particles():
    field = _record(0.0, 2.0)
    at_rest = ParticleData(z=-1, position=[1.0, 0.0, 0.0])
    moving = ParticleData(z=-1, position=[0.0, 1.0, 0.0], kinetic=[0.0, 0.0, 0.75])
    total = total_functionals(field, [at_rest, moving], alpha=0.01)
    assert total.E_total == pytest.approx(2.0 + 1.0 + 1.25)
    np.testing.assert_allclose(total.P, [0.0, 0.0, 0.75])
    np.testing.assert_allclose(total.J, [0.75, 0.0, 0.0])
    kinetic = total_functionals(field, [at_rest], alpha=0.01, subtract_rest=True)
    assert kinetic.E_total == 2.0


def test_record_rejects_non_finite_values():
    with pytest.raises(DomainError):
        _record(0.0, float('nan'))


def test_record_row_uses_nan_for_undefined_helicity():
    row = _record(1.0, 3.0).to_row()
    assert row['E'] == 3.0
    assert np.isnan(row['Y_B'])


def test_drift_report_needs_two_records():
    with pytest.raises(UsageError):
        drift_report([_record(0.0, 1.0)])


def test_drift_report_values():
    records = [_record(0.0, 1.0, m=(0.0, 0.0, 1.0), p=(0.0, 0.0, 0.5)),
               _record(2.0, 1.001, m=(0.0, 0.0, 2.0), p=(0.0, 0.0, 0.5))]
    report = drift_report(records)
    assert report.drifts['E'] == pytest.approx(0.001 / 1.001)
    assert report.drifts['P'] == 0.0
    assert report.boost_drift == 0.0
    assert 'Y' not in report.drifts


def test_monitor_warns_above_tolerance(caplog):
    monitor = ConservationMonitor(tolerance=1e-6)
    monitor.record(_record(0.0, 1.0))
    monitor.record(_record(1.0, 1.1))
    with caplog.at_level(logging.WARNING, logger='monitoring.drift'):
        report = monitor.report()
    assert not report.within(1e-6)
    assert any('E drift' in message for message in caplog.messages)


def test_static_record_of_single_charge():
    config = SolverConfig(grid=GridConfig(core_cells=8, outer_factor=20.0))
    sol = solve_electrostatic([PointCharge(z=1, position=[0.0, 0.0, 0.0])], 1.0, config)
    record = static_record(sol, alpha=0.3)
    assert record.Q == pytest.approx(1.0, abs=1e-3)
    assert np.all(record.P == 0.0)
    assert record.E_total > 0.0
