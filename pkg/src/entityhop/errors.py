"""Exception types shared across the package."""


class DataError(ValueError):
    """Malformed or inconsistent input data (bad JSONL line, duplicate id,
    invalid mention span, degenerate training set, ...)."""


class DegenerateTrainingSetError(DataError):
    """Training data without both a positive and a negative example."""


class RemoteEncoderError(RuntimeError):
    """Remote encoder connection or protocol failure. Carries the endpoint
    and the underlying cause in the message; callers never fall back
    silently."""
