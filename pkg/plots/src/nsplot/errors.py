"""Error type for the plotting tool; mirrors the producer's exit convention."""

__all__ = ["InputError"]


class InputError(ValueError):
    """Missing file, unknown schema, or missing column. CLI exit code 2."""
