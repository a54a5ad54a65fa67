"""Errors shared by the integration kernels."""


class StepUnderflow(RuntimeError):
    """Adaptive step collapsed (path passes too close to a pole)."""
