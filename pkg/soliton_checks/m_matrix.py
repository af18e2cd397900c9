"""
Divergence-form coefficient matrix of the static field equation for g given f.

For static fields E = grad f, H = grad g the magnetic equation reads
div(M grad g) = 0 with

    M = ((1 - b4 |grad f|**2) Id + b4 grad f (x) grad f) / sqrt(den),
    den = 1 - b4 (|grad f|**2 + |grad g|**2) + b4**2 |grad f x grad g|**2,

where b4 = beta**4.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh

from physics.errors import DomainError

DEGENERACY_TOLERANCE = 1e-10


@dataclass
class GradientPair:
    grad_f: np.ndarray
    grad_g: np.ndarray
    beta: float

    def __post_init__(self):
        self.grad_f = np.asarray(self.grad_f, dtype=float).reshape(3)
        self.grad_g = np.asarray(self.grad_g, dtype=float).reshape(3)
        if self.beta < 0:
            raise DomainError("beta must be non-negative")

    @property
    def scaled_f(self) -> float:
        return self.beta ** 4 * float(self.grad_f @ self.grad_f)

    @property
    def scaled_g(self) -> float:
        return self.beta ** 4 * float(self.grad_g @ self.grad_g)

    def denominator(self) -> float:
        b4 = self.beta ** 4
        cross = np.cross(self.grad_f, self.grad_g)
        return 1.0 - b4 * float(self.grad_f @ self.grad_f + self.grad_g @ self.grad_g) \
            + b4 * b4 * float(cross @ cross)

    @property
    def admissible(self) -> bool:
        return self.denominator() > 0.0


def _checked_denominator(pair: GradientPair) -> float:
    den = pair.denominator()
    if not den > 0.0:
        raise DomainError(f"inadmissible gradient pair: denominator {den:.6e} <= 0")
    return den


def m_matrix(pair: GradientPair) -> np.ndarray:
    """Symmetric 3x3 coefficient matrix; raises DomainError for inadmissible pairs."""
    den = _checked_denominator(pair)
    b4 = pair.beta ** 4
    f = pair.grad_f
    numerator = (1.0 - b4 * float(f @ f)) * np.eye(3) + b4 * np.outer(f, f)
    return numerator / np.sqrt(den)


def m_times_grad_g(pair: GradientPair) -> np.ndarray:
    """(grad g + b4 grad f x (grad f x grad g)) / sqrt(den), evaluated without M."""
    den = _checked_denominator(pair)
    f, g = pair.grad_f, pair.grad_g
    return (g + pair.beta ** 4 * np.cross(f, np.cross(f, g))) / np.sqrt(den)


@dataclass
class SpectrumReport:
    """
    Eigen-decomposition of M.

    ``axial`` is the eigenvalue belonging to the eigenvector along grad f and
    ``transverse`` the doubly degenerate one orthogonal to it (for grad f = 0
    all three coincide). ``quoted_axial`` is the alternative closed form
    b4 / sqrt(den) that is sometimes given for the axial eigenvalue; it is kept
    for cross-checking and ``axial_form_mismatch`` flags its disagreement with
    the eigensolver.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    axial: float
    transverse: float
    closed_axial: float
    closed_transverse: float
    quoted_axial: float
    axial_index: int

    @property
    def minimum(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def axial_form_mismatch(self) -> bool:
        return not np.isclose(self.quoted_axial, self.axial, rtol=1e-10, atol=0.0)

    @property
    def closed_form_error(self) -> float:
        """Largest closed-form deviation relative to the axial eigenvalue, the top of the spectrum."""
        error = max(abs(self.axial - self.closed_axial), abs(self.transverse - self.closed_transverse))
        return error / self.closed_axial


def m_spectrum(pair: GradientPair) -> SpectrumReport:
    """
    Eigenvalues of M by a symmetric eigensolver, with the axial and transverse
    directions identified and the closed forms alongside.
    """
    matrix = m_matrix(pair)
    values, vectors = eigh(matrix)
    den = pair.denominator()
    b4 = pair.beta ** 4
    closed_axial = 1.0 / np.sqrt(den)
    closed_transverse = (1.0 - pair.scaled_f) / np.sqrt(den)

    norm = float(np.linalg.norm(pair.grad_f))
    if norm > 0.0:
        alignment = np.abs(vectors.T @ (pair.grad_f / norm))
        axial_index = int(np.argmax(alignment))
    else:
        axial_index = 2
    transverse_values = np.delete(values, axial_index)
    return SpectrumReport(
        eigenvalues=values,
        eigenvectors=vectors,
        axial=float(values[axial_index]),
        transverse=float(np.mean(transverse_values)),
        closed_axial=float(closed_axial),
        closed_transverse=float(closed_transverse),
        quoted_axial=float(b4 / np.sqrt(den)),
        axial_index=axial_index,
    )
