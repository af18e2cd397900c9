"""
Scenario configuration parsing and validation.

A config is a JSON object with an optional ``kind`` (checked against the
requested subcommand), an optional ``seed`` and the parameters of that kind.
Unknown keys and type mismatches are rejected with the dotted path of the
offending entry. All defaults are resolved, and ``beta: "born"`` becomes the
numeric Born value for the configured alpha, so that writing the resolved
scenario and parsing it again gives the same scenario.
"""

import copy
import json
import logging
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from config.settings import (
    CERTIFICATE_EPSILON,
    CERTIFICATE_SAMPLES,
    DEFAULT_ALPHA,
    HJ_CELLS_PER_BETA,
    HJ_CFL,
    STATIC_CORE_CELLS,
    STATIC_GROWTH,
    STATIC_MAX_ITERATIONS,
    STATIC_OUTER_FACTOR,
    STATIC_QUADRATURE_LEVEL,
    STATIC_TOLERANCE,
    WAVE_CELLS,
    WAVE_CFL,
    WAVE_LENGTH,
)
from physics.constants import born_beta
from physics.errors import ConfigurationError

logger = logging.getLogger(__name__)

KINDS = ('constants', 'statics', 'waves', 'orbit', 'conserve', 'soliton-check')

REQUIRED = object()

GRID_SCHEMA = {
    'core_cells': (int, STATIC_CORE_CELLS),
    'growth': (float, STATIC_GROWTH),
    'outer_factor': (float, STATIC_OUTER_FACTOR),
    'coarse_cells': (int, 12),
    'quadrature_level': (int, STATIC_QUADRATURE_LEVEL),
}

CHARGE_SCHEMA = {
    'z': (int, REQUIRED),
    'position': ('vector', REQUIRED),
    'kappa': (float, 1.0),
}

PULSE_SCHEMA = {
    'shape': (str, 'gaussian'),
    'center': (float, 0.5 * WAVE_LENGTH),
    'width': (float, 1.0),
    'amplitude': (float, 0.5),
    'direction': (int, 1),
    'polarization': (str, 'x'),
    'wavenumber': (float, 0.0),
}

BASE_SCHEMA = {
    'alpha': (float, DEFAULT_ALPHA),
    'beta': ('beta', 'born'),
}

WAVE_SCHEMA = {
    'length': (float, WAVE_LENGTH),
    'cells': (int, WAVE_CELLS),
    't_end': (float, WAVE_LENGTH),
    'cfl': (float, WAVE_CFL),
    'viscosity': (float, 0.0),
    'snapshot_every': (int, 16),
    'pulses': (('list', PULSE_SCHEMA), [{}]),
}

SCHEMAS: Dict[str, Dict[str, Any]] = {
    'constants': {},
    'statics': {
        'charges': (('list', CHARGE_SCHEMA), REQUIRED),
        'grid': (('dict', GRID_SCHEMA), {}),
        'tolerance': (float, STATIC_TOLERANCE),
        'max_iterations': (int, STATIC_MAX_ITERATIONS),
        'a1_separations': (('list', float), []),
    },
    'waves': dict(WAVE_SCHEMA, collision=(bool, False)),
    'orbit': {
        'scenario': (str, 'infall'),
        'a1_source': (str, 'coulomb'),
        'a1_separations': (('list', float), []),
        'grid': (('dict', GRID_SCHEMA), {}),
        'r0_over_beta': (float, 50.0),
        'cells_per_beta': (int, HJ_CELLS_PER_BETA),
        'outer_factor': (float, 3.0),
        'cfl': (float, HJ_CFL),
        'snapshot_every': (int, 20),
        't_end': ('optional_float', None),
        'oracle': (bool, True),
        'oracle_velocity': ('vector', [0.0, 0.0, 0.0]),
        'window_over_beta': (float, 10.0),
    },
    'conserve': dict(WAVE_SCHEMA, cells=(int, 4 * WAVE_CELLS), tolerance=(float, 1e-6)),
    'soliton-check': {
        'epsilon': (float, CERTIFICATE_EPSILON),
        'samples': (int, CERTIFICATE_SAMPLES),
        'source': (str, 'random'),
        'charges': (('list', CHARGE_SCHEMA), []),
        'grid': (('dict', GRID_SCHEMA), {}),
        'min_distance_over_beta': (float, 2.0),
    },
}

CHOICES = {
    ('orbit', 'scenario'): ('static_electron', 'infall'),
    ('orbit', 'a1_source'): ('isolated', 'coulomb', 'solver'),
    ('soliton-check', 'source'): ('random', 'statics'),
}


@dataclass
class Scenario:
    kind: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0

    @property
    def alpha(self) -> float:
        return self.parameters['alpha']

    @property
    def beta(self) -> float:
        return self.parameters['beta']


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _coerce(value, rule, path: str):
    """Validate one value against its schema entry and return the resolved value."""
    if rule is float:
        if not _is_number(value):
            raise ConfigurationError(f"expected a number, got {type(value).__name__}", path=path)
        return float(value)
    if rule is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"expected an integer, got {type(value).__name__}", path=path)
        return value
    if rule is bool:
        if not isinstance(value, bool):
            raise ConfigurationError(f"expected true or false, got {type(value).__name__}", path=path)
        return value
    if rule is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"expected a string, got {type(value).__name__}", path=path)
        return value
    if rule == 'optional_float':
        return None if value is None else _coerce(value, float, path)
    if rule == 'beta':
        if value == 'born':
            return value
        beta = _coerce(value, float, path)
        if beta < 0:
            raise ConfigurationError("beta must be non-negative or \"born\"", path=path)
        return beta
    if rule == 'vector':
        if not isinstance(value, list) or len(value) != 3:
            raise ConfigurationError("expected a list of three numbers", path=path)
        return [_coerce(v, float, f"{path}[{i}]") for i, v in enumerate(value)]
    container, inner = rule
    if container == 'dict':
        return _resolve_mapping(value, inner, path)
    if not isinstance(value, list):
        raise ConfigurationError(f"expected a list, got {type(value).__name__}", path=path)
    if isinstance(inner, dict):
        return [_resolve_mapping(item, inner, f"{path}[{i}]") for i, item in enumerate(value)]
    return [_coerce(item, inner, f"{path}[{i}]") for i, item in enumerate(value)]


def _resolve_mapping(raw, schema: Dict[str, Any], path: str = '') -> Dict[str, Any]:
    if not isinstance(raw, dict):
        raise ConfigurationError(f"expected an object, got {type(raw).__name__}", path=path or None)
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        joined = ', '.join(f"{path}.{k}" if path else k for k in unknown)
        raise ConfigurationError(f"unknown key(s): {joined}", path=path or None)
    resolved = {}
    for key, (rule, default) in schema.items():
        key_path = f"{path}.{key}" if path else key
        if key in raw:
            resolved[key] = _coerce(raw[key], rule, key_path)
        elif default is REQUIRED:
            raise ConfigurationError("missing required field", path=key_path)
        else:
            resolved[key] = _coerce(copy.deepcopy(default), rule, key_path)
    return resolved


def _check_semantics(kind: str, params: Dict[str, Any]):
    for (choice_kind, key), allowed in CHOICES.items():
        if choice_kind == kind and params[key] not in allowed:
            raise ConfigurationError(f"must be one of {', '.join(allowed)}", path=key)
    if not params['alpha'] >= 0:
        raise ConfigurationError("alpha must be non-negative", path='alpha')
    if kind == 'orbit':
        speed_sq = sum(v * v for v in params['oracle_velocity'])
        if speed_sq >= 1.0:
            raise ConfigurationError("oracle velocity must be below the speed of light", path='oracle_velocity')
        if params['a1_source'] == 'solver' and len(params['a1_separations']) < 2:
            raise ConfigurationError("solver A1 needs at least two separations", path='a1_separations')
    if kind in ('waves', 'conserve') and not params['pulses']:
        raise ConfigurationError("at least one pulse is required", path='pulses')
    if kind == 'waves' and params['collision'] and len(params['pulses']) != 2:
        raise ConfigurationError("a collision needs exactly two pulses", path='pulses')
    if kind == 'statics' and not params['charges']:
        raise ConfigurationError("at least one charge is required", path='charges')
    if kind == 'soliton-check':
        if not 0.0 < params['epsilon'] < 1.0:
            raise ConfigurationError("epsilon must lie in (0, 1)", path='epsilon')
        if params['source'] == 'random' and params['samples'] < 1:
            raise ConfigurationError("samples must be positive", path='samples')
        if params['source'] == 'statics' and not params['charges']:
            raise ConfigurationError("statics samples need charges", path='charges')


def scenario_from_dict(raw: Dict[str, Any], kind: Optional[str] = None, seed: Optional[int] = None) -> Scenario:
    """
    Build a fully resolved Scenario from a parsed JSON object.

    Args:
        raw (dict): Config object
        kind (str): Requested kind; must agree with ``raw['kind']`` when both are set
        seed (int): Overrides the config seed when given

    Returns:
        Scenario: Validated scenario with numeric beta
    """
    if not isinstance(raw, dict):
        raise ConfigurationError("config must be a JSON object")
    raw = dict(raw)
    file_kind = raw.pop('kind', None)
    if file_kind is not None and kind is not None and file_kind != kind:
        raise ConfigurationError(f"config is for '{file_kind}', not '{kind}'", path='kind')
    kind = kind or file_kind
    if kind not in KINDS:
        raise ConfigurationError(f"unknown kind '{kind}'", path='kind')
    file_seed = raw.pop('seed', 0)
    file_seed = _coerce(file_seed, int, 'seed')

    params = _resolve_mapping(raw, dict(BASE_SCHEMA, **SCHEMAS[kind]))
    _check_semantics(kind, params)
    if params['beta'] == 'born':
        params['beta'] = born_beta(params['alpha'])
    return Scenario(kind=kind, parameters=params, seed=file_seed if seed is None else seed)


def parse_config(path: str, kind: Optional[str] = None, seed: Optional[int] = None) -> Scenario:
    """
    Read and validate a JSON scenario file.

    Raises:
        ConfigurationError: missing file, JSON syntax, unknown key, type
            mismatch or missing required field
    """
    if not os.path.isfile(path):
        raise ConfigurationError(f"config file not found: {path}")
    with open(path, 'r', encoding='utf-8') as handle:
        try:
            raw = json.load(handle)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")
    scenario = scenario_from_dict(raw, kind=kind, seed=seed)
    logger.info(f"Parsed {scenario.kind} scenario from {path} (seed={scenario.seed})")
    return scenario


def scenario_to_dict(scenario: Scenario) -> Dict[str, Any]:
    """Resolved config, parseable back into the same Scenario."""
    return {'kind': scenario.kind, 'seed': scenario.seed, **copy.deepcopy(scenario.parameters)}
