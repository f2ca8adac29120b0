"""
FluxCoupler Exceptions

Error taxonomy shared by the numerical services and the command-line front end.
Validation-type errors subclass ValueError and solver-type errors subclass
RuntimeError so callers catching the builtin types keep working.
"""

from typing import Any, Dict, Optional


class FluxCouplerError(Exception):
    """Base class for all FluxCoupler errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details: Dict[str, Any] = details or {}


class ValidationError(FluxCouplerError, ValueError):
    """Input violates a documented precondition."""


class ConfigError(FluxCouplerError, ValueError):
    """Configuration document cannot be loaded or validated."""


class DomainError(FluxCouplerError, ValueError):
    """Argument outside the mathematical domain of a function."""


class RangeError(FluxCouplerError, ValueError):
    """A required feature is not bracketed by the supplied scan range."""


class NotBracketedError(RangeError):
    """A sweep has no interior minimum to extract."""


class UnphysicalNetworkError(FluxCouplerError, ValueError):
    """Inductance network is not positive definite."""


class SolverError(FluxCouplerError, RuntimeError):
    """Eigensolver failed; details carry the solver diagnostics."""


class ConvergenceError(SolverError):
    """Truncation does not meet the convergence contract."""

    def __init__(self, message: str, mode: str, levels: int, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.mode = mode
        self.levels = levels


class IdentificationError(FluxCouplerError, RuntimeError):
    """Composite eigenstate cannot be matched to a bare product state."""


class NumericError(FluxCouplerError, RuntimeError):
    """Quadrature or root-finding failure; details carry diagnostics."""


class InconsistentDataError(FluxCouplerError, ValueError):
    """Measured data row contradicts the model (e.g. rate below background)."""

    def __init__(self, message: str, row_index: Optional[int] = None, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.row_index = row_index


class UnboundedAmplitudeError(FluxCouplerError, ValueError):
    """Noise amplitude cannot be bounded because the sensitivity vanishes."""
