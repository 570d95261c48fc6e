"""Exception types raised by the ingest, metric and scoring layers."""

from __future__ import annotations


class SnapshotError(ValueError):
    """Invalid snapshot data. ``locus`` points at the offending file/line when known."""

    def __init__(self, message: str, locus: str | None = None):
        self.locus = locus
        super().__init__(f"{locus}: {message}" if locus else message)


class SchemaError(SnapshotError):
    pass


class DuplicateTicker(SnapshotError):
    pass


class EmptyDistribution(SnapshotError):
    pass


class AllZeroWeights(SnapshotError):
    pass


class ZeroAssetValue(ValueError):
    pass


class EmptyReferenceSet(ValueError):
    pass


class UnknownMetric(KeyError):
    def __str__(self) -> str:
        return f"unknown metric {self.args[0]!r}"


class InvalidWeights(ValueError):
    pass
