"""
Exception hierarchy for the field lab.

Every class carries the process exit code the scenario runner returns when
the error escapes a run.
"""

from typing import Any, List, Optional


class MBIError(Exception):
    """Base class for all errors raised by the lab."""

    exit_code = 1


class ConfigurationError(MBIError, ValueError):
    """Invalid configuration: unknown keys, bad types, CFL violations."""

    exit_code = 2

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class UsageError(MBIError, ValueError):
    """An operation was called outside its preconditions."""

    exit_code = 2


class UnsupportedGeometryError(MBIError, ValueError):
    """Valid input outside the geometries a solver implements."""

    exit_code = 2


class DomainError(MBIError, ValueError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 4


class InadmissibleStateError(DomainError):
    """Field strengths outside the admissible set of the inverse aether law."""

    def __init__(self, radicand: float, e_norm: float, h_norm: float):
        self.radicand = radicand
        self.e_norm = e_norm
        self.h_norm = h_norm
        super().__init__(
            f"inadmissible field strengths: radicand={radicand:.6e}, "
            f"|E|={e_norm:.6e}, |H|={h_norm:.6e}"
        )


class LipschitzBoundError(DomainError):
    """Potential gradient at or beyond the bound |grad A| < beta**-2."""

    def __init__(self, scaled_gradient: float):
        self.scaled_gradient = scaled_gradient
        super().__init__(
            f"Lipschitz bound violated: beta^2 |grad A| = {scaled_gradient:.6e} >= 1"
        )


class SolverConvergenceError(MBIError, RuntimeError):
    """Iterative solver failed to reach its tolerance."""

    exit_code = 3

    def __init__(self, message: str, residual_history: Optional[List[float]] = None):
        self.residual_history = list(residual_history or [])
        super().__init__(message)


class NumericalAbort(MBIError, RuntimeError):
    """Time stepping produced non-finite values; carries the last good state."""

    exit_code = 4

    def __init__(self, message: str, last_good: Any = None):
        self.last_good = last_good
        super().__init__(message)


class HamiltonJacobiBreakdown(NumericalAbort):
    """Monotone scheme consistency check failed during the phase evolution."""

    def __init__(self, message: str, last_good: Any = None, diagnostics: Optional[dict] = None):
        self.diagnostics = dict(diagnostics or {})
        super().__init__(message, last_good=last_good)
