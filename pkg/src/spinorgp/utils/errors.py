"""Custom exception classes for spinorgp."""

from typing import Any, Dict, Optional


class SpinorGPError(Exception):
    """Base exception for spinorgp package."""
    pass


class ConfigurationError(SpinorGPError):
    """Raised when configuration is invalid."""
    pass


class HorizonError(ConfigurationError):
    """Raised when a time lies outside the configured horizon."""
    pass


class StructuralError(SpinorGPError):
    """Raised when array shapes do not match their grid or basis."""
    pass


class ContractError(SpinorGPError):
    """Raised when an operation's input pre-condition is violated."""
    pass


class EvaluationError(SpinorGPError):
    """Raised when a potential component evaluates to a non-finite value."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field


class BlowUpError(SpinorGPError):
    """Raised when a time step produces NaN or infinite values."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class SizeError(SpinorGPError):
    """Raised when a basis or expansion exceeds its configured cap."""

    def __init__(self, message: str, required: int, cap: int):
        super().__init__(message)
        self.required = required
        self.cap = cap


class AccuracyError(SpinorGPError):
    """Raised when an iterative solver misses its tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class ToleranceError(SpinorGPError):
    """Raised when quadrature does not converge."""
    pass


class ConstructionError(SpinorGPError):
    """Raised when the shell construction finds no root."""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class UnsupportedCaseError(SpinorGPError):
    """Raised for inputs outside the closed-form regime."""
    pass


class ScenarioError(SpinorGPError):
    """Raised when a scenario fails; carries the scenario name."""

    def __init__(self, scenario: str, cause: BaseException):
        super().__init__(f"scenario '{scenario}' failed: {cause}")
        self.scenario = scenario
        self.cause = cause
