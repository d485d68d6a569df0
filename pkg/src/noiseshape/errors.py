"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid parameters or configuration (CLI exit code 2)."""


class NumericalError(RuntimeError):
    """Numerical failure: rank deficiency, overload, non-convergence (CLI exit code 3)."""
