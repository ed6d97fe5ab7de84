"""Exception types shared across the package."""


class InvariantViolation(RuntimeError):
    """A mathematical invariant (unitarity, trace, positivity, ...) was breached."""


class IntegrationAccuracyError(InvariantViolation):
    """A fixed-step integration drifted beyond its accuracy budget.

    Raising instead of silently renormalizing keeps the drift visible; the
    caller should increase the step count.
    """


class ConfigError(ValueError):
    """A run configuration could not be parsed or validated."""
