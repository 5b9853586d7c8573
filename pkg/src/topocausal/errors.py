"""Shared exception types."""


class DataError(ValueError):
    """Malformed or unusable input data (CSV, TSV, JSON, or in-memory tables)."""


class NoConnectedThresholdError(RuntimeError):
    """No threshold keeps every variable in one component.

    Raised by the connected threshold when the graph on all positive-weight
    pairs is already disconnected.  The knee threshold tolerates such graphs
    and is the suggested fallback.
    """
