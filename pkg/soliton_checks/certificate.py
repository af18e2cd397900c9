"""
Ellipticity certificate over a set of gradient pairs.

Under b4 |grad f|**2 <= 1 - eps and b4 |grad g|**2 <= 1 - eps every admissible
pair has den <= (1 - b4|grad f|**2)(1 - b4|grad g|**2), so the smallest
eigenvalue of M is at least sqrt(eps). That bound is the reported floor.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from config.settings import CERTIFICATE_EPSILON
from physics.errors import ConfigurationError, UsageError
from soliton_checks.m_matrix import GradientPair, m_spectrum

logger = logging.getLogger(__name__)

FLOOR_SLACK = 1e-12
MAX_REPORTED_FAILURES = 20


@dataclass
class CertificateReport:
    epsilon: float
    samples: int
    floor: float
    min_eigenvalue: float
    max_closed_form_error: float
    axial_form_mismatches: int
    failures: List[dict] = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.min_eigenvalue >= self.floor * (1.0 - FLOOR_SLACK)

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'epsilon': self.epsilon,
            'samples': self.samples,
            'floor': self.floor,
            'min_eigenvalue': self.min_eigenvalue,
            'max_closed_form_error': self.max_closed_form_error,
            'axial_form_mismatches': self.axial_form_mismatches,
            'failure_count': self.failure_count,
            'failures': self.failures,
        }


def certificate_floor(epsilon: float) -> float:
    return math.sqrt(epsilon)


def ellipticity_certificate(samples: Sequence[GradientPair],
                            epsilon: float = CERTIFICATE_EPSILON) -> CertificateReport:
    """
    Check the smallness hypotheses and the eigenvalue floor on every sample.

    Args:
        samples: Gradient pairs
        epsilon (float): Hypothesis margin in (0, 1)

    Returns:
        CertificateReport: Pass iff no sample violates a hypothesis or is
            inadmissible and the smallest eigenvalue reaches the floor
    """
    if not 0.0 < epsilon < 1.0:
        raise ConfigurationError("epsilon must lie in (0, 1)", path='epsilon')
    if len(samples) == 0:
        raise UsageError("certificate needs at least one sample")

    bound = 1.0 - epsilon
    floor = certificate_floor(epsilon)
    min_eigenvalue = math.inf
    closed_error = 0.0
    mismatches = 0
    failures: List[dict] = []
    failure_count = 0

    def fail(index: int, reason: str, pair: GradientPair):
        nonlocal failure_count
        failure_count += 1
        if len(failures) < MAX_REPORTED_FAILURES:
            failures.append({'index': index, 'reason': reason,
                             'scaled_f': pair.scaled_f, 'scaled_g': pair.scaled_g})

    for i, pair in enumerate(samples):
        if pair.scaled_f > bound or pair.scaled_g > bound:
            fail(i, 'hypothesis', pair)
            continue
        if not pair.admissible:
            fail(i, 'inadmissible', pair)
            continue
        spectrum = m_spectrum(pair)
        min_eigenvalue = min(min_eigenvalue, spectrum.minimum)
        closed_error = max(closed_error, spectrum.closed_form_error)
        mismatches += int(spectrum.axial_form_mismatch)
        if spectrum.minimum < floor * (1.0 - FLOOR_SLACK):
            fail(i, 'eigenvalue', pair)

    report = CertificateReport(
        epsilon=epsilon, samples=len(samples), floor=floor,
        min_eigenvalue=float(min_eigenvalue) if math.isfinite(min_eigenvalue) else float('nan'),
        max_closed_form_error=closed_error, axial_form_mismatches=mismatches,
        failures=failures, failure_count=failure_count,
    )
    logger.info(f"Ellipticity certificate: {'pass' if report.passed else 'fail'} over {len(samples)} samples, "
                f"min eigenvalue {report.min_eigenvalue:.6e}, floor {floor:.6e}")
    return report


def random_gradient_pairs(rng: np.random.Generator, count: int, beta: float,
                          epsilon: float = CERTIFICATE_EPSILON) -> List[GradientPair]:
    """
    Admissible pairs drawn uniformly in direction with b4 |grad|**2 uniform
    on [0, 1 - epsilon] for both gradients.
    """
    if not beta > 0:
        raise ConfigurationError("random pairs need beta > 0", path='beta')
    pairs: List[GradientPair] = []
    scale = 1.0 / beta ** 2
    while len(pairs) < count:
        directions = rng.normal(size=(2, 3))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        magnitudes = np.sqrt(rng.uniform(0.0, 1.0 - epsilon, size=2)) * scale
        pair = GradientPair(directions[0] * magnitudes[0], directions[1] * magnitudes[1], beta)
        if pair.admissible:
            pairs.append(pair)
    return pairs


def pairs_from_solution(sol, min_distance: Optional[float] = None) -> List[GradientPair]:
    """
    Electrostatic gradient pairs (grad f = E, grad g = 0) at the quadrature
    points of a static solution at least ``min_distance`` from every charge.
    """
    mesh = sol.mesh
    min_distance = 2.0 * sol.beta if min_distance is None else min_distance
    rho, zeta = mesh.quadrature.rho, mesh.quadrature.zeta
    keep = np.ones(rho.size, dtype=bool)
    for zk in sol.charge_zeta:
        keep &= np.hypot(rho, zeta - zk) >= min_distance
    e = sol.field_strength[keep]
    return [GradientPair([er, 0.0, ez], np.zeros(3), sol.beta) for er, ez in e]
