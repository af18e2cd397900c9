"""
Scenario dispatch: one handler per scenario kind.

Each handler runs the numerical modules, writes its artifacts through an
ArtifactExporter and returns a flat summary for the console table.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List

import numpy as np
import pandas as pd

from config.logging_config import get_scenario_logger
from electrostatics.analysis import (
    energy_of_static_solution,
    evaluate_A1,
    solution_header,
    solution_table,
)
from electrostatics.born import born_central_value, born_field_energy, defect_potential
from electrostatics.mesh import GridConfig
from electrostatics.solver import PointCharge, SolverConfig, solve_electrostatic
from guidance.a1_profile import A1Profile
from guidance.comparison import reduction_comparison
from guidance.guiding import guide
from guidance.hamilton_jacobi import HJConfig, hj_evolve, nucleus_infall_state, static_electron_state
from guidance.oracle import CoulombField, ExternalField, test_particle_oracle
from monitoring.conservation import records_to_rows, static_record
from monitoring.drift import ConservationMonitor, drift_report
from physics.constants import born_ratio, dimensional_scales
from physics.errors import ConfigurationError
from scenarios.config_parser import Scenario, scenario_to_dict
from scenarios.exporter import ArtifactExporter
from soliton_checks.certificate import ellipticity_certificate, pairs_from_solution, random_gradient_pairs
from waves.collision import collide_pulses
from waves.evolution import SchemeConfig, evolve, make_traveling_solution, superpose
from waves.profiles import PulseProfile

PHASE_SNAPSHOTS = 11


@dataclass
class RunResult:
    kind: str
    out_dir: str
    files: List[str] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


def _solver_config(params: Dict[str, Any]) -> SolverConfig:
    return SolverConfig(
        grid=GridConfig(**params['grid']),
        tolerance=params.get('tolerance', SolverConfig().tolerance),
        max_iterations=params.get('max_iterations', SolverConfig().max_iterations),
    )


def _charges(params: Dict[str, Any]) -> List[PointCharge]:
    return [PointCharge(z=c['z'], position=c['position'], kappa=c['kappa']) for c in params['charges']]


def _header(scenario: Scenario, grid: Any = None, scheme: Any = None) -> Dict[str, Any]:
    return {
        'kind': scenario.kind,
        'seed': scenario.seed,
        'alpha': scenario.alpha,
        'beta': scenario.beta,
        'grid': grid if grid is not None else 'none',
        'scheme': scheme if scheme is not None else 'none',
    }


def run_constants(scenario: Scenario, exporter: ArtifactExporter) -> Dict[str, Any]:
    alpha, beta = scenario.alpha, scenario.beta
    row = {
        'alpha': alpha,
        'beta': beta,
        'beta_over_alpha': beta / alpha if alpha > 0 else born_ratio(),
        'born_ratio': born_ratio(),
    }
    if beta > 0:
        row['alpha_A_born_origin'] = alpha * abs(born_central_value(beta))
        row['field_energy_closed'] = born_field_energy(alpha, beta, method='closed')
        row['field_energy_quadrature'] = born_field_energy(alpha, beta, method='quadrature')
    exporter.export_rows([row], 'constants.csv')
    exporter.export_json({'scales': dimensional_scales()}, 'scales.json')
    return row


def _born_sup_error(sol) -> float:
    charge = sol.charges[0]
    nodes = sol.mesh.nodes
    r = np.hypot(nodes[:, 0], nodes[:, 1] - sol.charge_zeta[0])
    exact = defect_potential(r, sol.beta, charge.z)
    return float(np.max(np.abs(sol.potential - exact)) / np.max(np.abs(exact)))


def run_statics(scenario: Scenario, exporter: ArtifactExporter) -> Dict[str, Any]:
    params = scenario.parameters
    alpha, beta = scenario.alpha, scenario.beta
    config = _solver_config(params)
    sol = solve_electrostatic(_charges(params), beta, config)
    header = solution_header(sol, alpha)

    exporter.export_frame(solution_table(sol), 'solution.csv', {'solution': header})
    record = static_record(sol, alpha)
    exporter.export_rows(records_to_rows([record]), 'conserved.csv')
    a1 = [evaluate_A1(sol, k) for k in range(len(sol.charges))]
    summary = {
        'iterations': sol.iterations,
        'final_residual': header['final_residual'],
        'max_scaled_gradient': sol.max_scaled_gradient,
        'energy': energy_of_static_solution(sol, alpha),
        'charge_flux': record.Q,
    }
    for k, value in enumerate(a1):
        summary[f'A1[{k}]'] = value
    if len(sol.charges) == 1:
        summary['born_sup_error'] = _born_sup_error(sol)

    if params['a1_separations']:
        profile = A1Profile.from_solver(beta, params['a1_separations'], config)
        self_value = born_central_value(beta, sign=-1)
        rows = [{
            'separation': s,
            'A1': v,
            'A1_coulomb': self_value + 1.0 / s,
            'scaled_deviation': abs(v - (self_value + 1.0 / s)) * s * s / beta,
        } for s, v in zip(profile.separations, profile.values)]
        exporter.export_rows(rows, 'a1.csv', {'grid': config.grid.to_dict()})
    exporter.export_json({'summary': summary, 'a1': a1}, 'statics.json')
    return summary


def _wave_initial(params: Dict[str, Any]):
    profiles = [PulseProfile(**p) for p in params['pulses']]
    states = [make_traveling_solution(p, 0.0, params['length'], params['cells']) for p in profiles]
    return profiles, superpose(states)


def _scheme(params: Dict[str, Any]) -> SchemeConfig:
    return SchemeConfig(cfl=params['cfl'], viscosity=params['viscosity'],
                        snapshot_every=params['snapshot_every'])


def _trajectory_frame(trajectory) -> pd.DataFrame:
    frames = [pd.DataFrame({'t': s.time, 'z': s.z, 'Bx': s.Bx, 'By': s.By, 'Dx': s.Dx, 'Dy': s.Dy})
              for s in trajectory.snapshots]
    return pd.concat(frames, ignore_index=True)


def run_waves(scenario: Scenario, exporter: ArtifactExporter) -> Dict[str, Any]:
    params = scenario.parameters
    alpha, beta = scenario.alpha, scenario.beta
    scheme = _scheme(params)
    if params['collision']:
        right, left = sorted((PulseProfile(**p) for p in params['pulses']), key=lambda p: -p.direction)
        report = collide_pulses(right, left, params['length'], params['cells'], beta,
                                params['t_end'], scheme, alpha=alpha)
        trajectory = report.trajectory
        exporter.export_json({'displacement': report.displacement,
                              'shape_distance': report.shape_distance,
                              'energy_drift': report.energy_drift}, 'collision.json')
    else:
        _, initial = _wave_initial(params)
        trajectory = evolve(initial, beta, params['t_end'], scheme, alpha=alpha)
    exporter.export_frame(_trajectory_frame(trajectory), 'trajectory.csv')
    exporter.export_rows(records_to_rows(trajectory.records), 'conserved.csv')
    drifts = drift_report(trajectory.records).drifts
    return {'steps': trajectory.steps, 'dt': trajectory.dt,
            **{f'drift {k}': v for k, v in drifts.items()}}


def run_conserve(scenario: Scenario, exporter: ArtifactExporter) -> Dict[str, Any]:
    params = scenario.parameters
    _, initial = _wave_initial(params)
    trajectory = evolve(initial, scenario.beta, params['t_end'], _scheme(params), alpha=scenario.alpha)
    monitor = ConservationMonitor(tolerance=params['tolerance'])
    for record in trajectory.records:
        monitor.record(record)
    report = monitor.report()
    exporter.export_rows(records_to_rows(trajectory.records), 'conserved.csv')
    rows = [{'t': t, 'Mx_tPx': b[0], 'My_tPy': b[1], 'Mz_tPz': b[2]}
            for t, b in zip(report.times, report.boost_residual)]
    exporter.export_rows(rows, 'boost.csv')
    exporter.export_rows([{'quantity': k, 'drift': v} for k, v in report.drifts.items()], 'drift.csv')
    return {'within_tolerance': report.within(params['tolerance']),
            **{f'drift {k}': v for k, v in report.drifts.items()}}


def _a1_profile(params: Dict[str, Any], beta: float) -> A1Profile:
    if params['scenario'] == 'static_electron' or params['a1_source'] == 'isolated':
        return A1Profile.isolated(beta)
    if params['a1_source'] == 'solver':
        config = SolverConfig(grid=GridConfig(**params['grid']))
        return A1Profile.from_solver(beta, params['a1_separations'], config)
    return A1Profile.coulomb(beta)


def _phase_frame(trajectory) -> pd.DataFrame:
    frame = trajectory.to_frame()
    keep = sorted(set(np.linspace(0, len(trajectory.times) - 1, PHASE_SNAPSHOTS).round().astype(int)))
    return frame[frame['t'].isin([trajectory.times[k] for k in keep])].reset_index(drop=True)


def run_orbit(scenario: Scenario, exporter: ArtifactExporter) -> Dict[str, Any]:
    params = scenario.parameters
    alpha, beta = scenario.alpha, scenario.beta
    if not beta > 0:
        raise ConfigurationError("orbit scenarios need beta > 0", path='beta')
    profile = _a1_profile(params, beta)
    r0 = params['r0_over_beta'] * beta
    start = np.array([0.0, 0.0, r0])
    config = HJConfig(cfl=params['cfl'], snapshot_every=params['snapshot_every'])

    if params['scenario'] == 'static_electron':
        state = static_electron_state(profile, beta, alpha, r_max=params['outer_factor'] * r0,
                                      cells_per_beta=params['cells_per_beta'])
        fields: ExternalField = ExternalField()
    else:
        state = nucleus_infall_state(profile, r0, beta, alpha, cells_per_beta=params['cells_per_beta'],
                                     outer_factor=params['outer_factor'])
        fields = CoulombField(charge=1.0)

    v0 = np.array(params['oracle_velocity'])
    p0 = v0 / math.sqrt(1.0 - float(v0 @ v0))
    oracle_dt = config.cfl * state.dr * config.snapshot_every
    t_end = params['t_end']
    oracle_track = None
    if t_end is None:
        if params['scenario'] == 'infall':
            # run the oracle to the inner grid edge to size the evolution window
            oracle_track = test_particle_oracle(start, p0, fields, alpha, 100.0 * r0 / max(alpha, 1e-300),
                                                oracle_dt, r_stop=state.r_min)
            t_end = float(oracle_track.times[-1])
        else:
            t_end = 1.0

    trajectory = hj_evolve(state, t_end, config)
    track = guide(trajectory, start)
    header = {'grid': {'r_min': state.r_min, 'r_max': state.r_max, 'dr': state.dr,
                       'points': int(state.r_grid.size)},
              'scheme': config.to_dict(), 'a1': profile.to_dict()}
    exporter.export_frame(_phase_frame(trajectory), 'phase.csv', header)
    exporter.export_frame(track.to_frame(), 'track.csv', header)

    final = trajectory.final
    summary = {
        't_end': t_end,
        'reason': track.reason,
        'r_final': float(track.radii[-1]),
        'max_speed': float(np.max(track.speeds)),
        'K_far': state.far_rate,
        'measured_rate': float((final.Phi[-1] - state.Phi[-1]) / (t_end - state.time)) if t_end > state.time else 0.0,
    }
    if params['oracle']:
        if oracle_track is None or oracle_track.times[-1] > t_end:
            oracle_track = test_particle_oracle(start, p0, fields, alpha, t_end, oracle_dt, r_stop=state.r_min)
        exporter.export_frame(oracle_track.to_frame(), 'oracle.csv', header)
        if params['scenario'] == 'infall' and not np.any(v0):
            report = reduction_comparison(track, oracle_track, params['window_over_beta'] * beta)
            exporter.export_json({'comparison': report.to_dict()}, 'comparison.json')
            summary['discrepancy'] = report.discrepancy
    return summary


def run_soliton_check(scenario: Scenario, exporter: ArtifactExporter) -> Dict[str, Any]:
    params = scenario.parameters
    beta = scenario.beta
    if params['source'] == 'random':
        rng = np.random.default_rng(scenario.seed)
        pairs = random_gradient_pairs(rng, params['samples'], beta, params['epsilon'])
    else:
        sol = solve_electrostatic(_charges(params), beta, SolverConfig(grid=GridConfig(**params['grid'])))
        pairs = pairs_from_solution(sol, params['min_distance_over_beta'] * beta)
    report = ellipticity_certificate(pairs, params['epsilon'])
    exporter.export_json({'certificate': report.to_dict()}, 'certificate.json')
    return {k: v for k, v in report.to_dict().items() if k != 'failures'}


HANDLERS: Dict[str, Callable[[Scenario, ArtifactExporter], Dict[str, Any]]] = {
    'constants': run_constants,
    'statics': run_statics,
    'waves': run_waves,
    'orbit': run_orbit,
    'conserve': run_conserve,
    'soliton-check': run_soliton_check,
}


def _grid_descriptor(scenario: Scenario):
    params = scenario.parameters
    if 'cells' in params:
        return {'length': params['length'], 'cells': params['cells']}
    if 'grid' in params:
        return params['grid']
    return None


def _scheme_descriptor(scenario: Scenario):
    params = scenario.parameters
    if scenario.kind in ('waves', 'conserve'):
        return _scheme(params).to_dict()
    if scenario.kind == 'orbit':
        return HJConfig(cfl=params['cfl'], snapshot_every=params['snapshot_every']).to_dict()
    if scenario.kind == 'statics':
        return {'method': 'damped-newton/stream-function', 'tolerance': params['tolerance']}
    return None


def run(scenario: Scenario, out_dir: str) -> RunResult:
    """
    Run one scenario and write its artifacts plus MANIFEST.json into out_dir.

    Errors from the numerical modules propagate unchanged; the caller maps
    them to exit codes.
    """
    log = get_scenario_logger('runs', scenario.kind, scenario.seed)
    exporter = ArtifactExporter(out_dir, _header(scenario, _grid_descriptor(scenario),
                                                 _scheme_descriptor(scenario)))
    exporter.export_json(scenario_to_dict(scenario), 'config.json', with_header=False)
    log.info(f"Running into {out_dir}")
    summary = HANDLERS[scenario.kind](scenario, exporter)
    exporter.write_manifest()
    log.info(f"Wrote {len(exporter.files)} artifacts")
    return RunResult(kind=scenario.kind, out_dir=out_dir, files=list(exporter.files), summary=summary)
