"""Exception and warning types shared across the package."""

__all__ = ["InfeasibleError", "NonConvergenceError", "FidelityClampWarning"]


class InfeasibleError(ValueError):
    """Purification cannot reach the requested target for these parameters."""


class NonConvergenceError(RuntimeError):
    """An iteration exceeded its defensive step limit."""


class FidelityClampWarning(RuntimeWarning):
    """A computed fidelity left (0, 1] by floating-point noise and was clamped."""
