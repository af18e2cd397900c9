"""
Pointwise Born-Infeld constitutive laws.

All maps accept single vectors of shape (3,) or stacks of shape (..., 3) and
operate sample-wise without Python loops.
"""

from dataclasses import dataclass

import numpy as np

from physics.errors import InadmissibleStateError, LipschitzBoundError


@dataclass
class BDState:
    """Magnetic induction B and electric displacement D."""

    B: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        self.B = np.asarray(self.B, dtype=float)
        self.D = np.asarray(self.D, dtype=float)


@dataclass
class EBState:
    """Field strengths E and H."""

    E: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        self.E = np.asarray(self.E, dtype=float)
        self.H = np.asarray(self.H, dtype=float)


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum('...i,...i->...', a, b)


def _sq(a: np.ndarray) -> np.ndarray:
    return _dot(a, a)


def forward_radicand(B, D, beta: float) -> np.ndarray:
    """1 + beta^4 (|B|^2 + |D|^2) + beta^8 |B x D|^2, always >= 1."""
    B = np.asarray(B, dtype=float)
    D = np.asarray(D, dtype=float)
    b4 = beta ** 4
    return 1.0 + b4 * (_sq(B) + _sq(D)) + b4 * b4 * _sq(np.cross(B, D))


def inverse_radicand(E, H, beta: float) -> np.ndarray:
    """1 - beta^4 (|E|^2 + |H|^2) + beta^8 |E x H|^2, positive on the admissible set."""
    E = np.asarray(E, dtype=float)
    H = np.asarray(H, dtype=float)
    b4 = beta ** 4
    return 1.0 - b4 * (_sq(E) + _sq(H)) + b4 * b4 * _sq(np.cross(E, H))


def fields_from_state(s: BDState, beta: float) -> EBState:
    """
    Born-Infeld aether law (B, D) -> (E, H).

    Args:
        s (BDState): Induction and displacement samples
        beta (float): Aether constant

    Returns:
        EBState: E = (D - b4 B x (B x D)) / R, H = (B - b4 D x (D x B)) / R
    """
    B, D = s.B, s.D
    b4 = beta ** 4
    R = np.sqrt(forward_radicand(B, D, beta))[..., None]
    E = (D - b4 * np.cross(B, np.cross(B, D))) / R
    H = (B - b4 * np.cross(D, np.cross(D, B))) / R
    return EBState(E=E, H=H)


def state_from_fields(f: EBState, beta: float) -> BDState:
    """
    Inverse aether law (E, H) -> (B, D).

    Raises:
        InadmissibleStateError: if any sample has a non-positive radicand
    """
    E, H = f.E, f.H
    b4 = beta ** 4
    radicand = inverse_radicand(E, H, beta)
    bad = np.ravel(~(radicand > 0))
    if bad.any():
        worst = int(np.flatnonzero(bad)[0])
        e_norm = np.broadcast_to(np.sqrt(_sq(E)), np.shape(radicand)).ravel()
        h_norm = np.broadcast_to(np.sqrt(_sq(H)), np.shape(radicand)).ravel()
        raise InadmissibleStateError(
            float(np.ravel(radicand)[worst]), float(e_norm[worst]), float(h_norm[worst])
        )
    # the radicand factors as (1 - b4 |E|^2)(1 - b4 |H|^2) - b4^2 (E . H)^2, so both
    # factors share a sign on the admissible set and S takes it
    S = np.copysign(np.sqrt(radicand), 1.0 - b4 * _sq(E))[..., None]
    B = (H + b4 * np.cross(E, np.cross(E, H))) / S
    D = (E + b4 * np.cross(H, np.cross(H, E))) / S
    return BDState(B=B, D=D)


def ultra_fields_from_state(s: BDState) -> EBState:
    """
    Ultra Born-Infeld law (beta -> infinity).

    E = unit(B x D) x B and H = unit(D x B) x D; both vanish exactly where
    B x D = 0.
    """
    B, D = s.B, s.D
    n = np.cross(B, D)
    norm = np.sqrt(_sq(n))[..., None]
    degenerate = norm == 0.0
    unit = np.divide(n, np.where(degenerate, 1.0, norm))
    unit = np.where(degenerate, 0.0, unit)
    E = np.cross(unit, B)
    H = np.cross(-unit, D)
    return EBState(E=E, H=H)


def maxwell_fields_from_state(s: BDState) -> EBState:
    """Maxwell's linear vacuum law, the beta -> 0 limit: E = D, H = B."""
    return EBState(E=s.D.copy(), H=s.B.copy())


def electrostatic_pair(grad_a, beta: float):
    """
    Static field strength and displacement from a potential gradient.

    Args:
        grad_a: Gradient samples of A, shape (..., 3) or (..., 2)
        beta (float): Aether constant

    Returns:
        tuple: (E, D) with E = -grad A and D = E / sqrt(1 - b4 |grad A|^2)
    """
    g = np.asarray(grad_a, dtype=float)
    scaled = beta ** 4 * _sq(g)
    if not np.all(scaled < 1.0):
        raise LipschitzBoundError(float(np.sqrt(np.max(scaled))))
    E = -g
    D = E / np.sqrt(1.0 - scaled)[..., None]
    return E, D


def static_field_from_displacement(D, beta: float) -> np.ndarray:
    """Static forward law E = D / sqrt(1 + b4 |D|^2); |E| < beta**-2 always."""
    D = np.asarray(D, dtype=float)
    return D / np.sqrt(1.0 + beta ** 4 * _sq(D))[..., None]


def energy_density(B, D, alpha: float, beta: float) -> np.ndarray:
    """(alpha / 4 pi beta^4) (sqrt(R) - 1), written without cancellation for weak fields."""
    B = np.asarray(B, dtype=float)
    D = np.asarray(D, dtype=float)
    b4 = beta ** 4
    excess = (_sq(B) + _sq(D)) + b4 * _sq(np.cross(B, D))
    # sqrt(1 + b4 x) - 1 = x b4 / (sqrt(1 + b4 x) + 1)
    return alpha / (4.0 * np.pi) * excess / (np.sqrt(1.0 + b4 * excess) + 1.0)
