"""Directional min-max rescaling of raw metrics onto a 0-100 risk scale."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .errors import EmptyReferenceSet, UnknownMetric
from .metrics import DerivedMetrics, derive_metrics
from .snapshot import AssetSnapshot, SnapshotSet

DEGENERATE_SCORE = 50.0
UNDEFINED_SCORE = 100.0


class Direction(str, Enum):
    PROTECTIVE = "protective"  # higher value -> lower risk
    RISK_INCREASING = "risk_increasing"


# metric name -> (direction, attribute on DerivedMetrics or AssetSnapshot)
METRICS: dict[str, tuple[Direction, str]] = {
    "turnover": (Direction.PROTECTIVE, "turnover"),
    "active_ratio": (Direction.PROTECTIVE, "active_ratio"),
    "transfer_intensity": (Direction.PROTECTIVE, "transfer_intensity"),
    "ats": (Direction.RISK_INCREASING, "avg_transfer_size"),
    "holders": (Direction.PROTECTIVE, "holders"),
    "avh": (Direction.RISK_INCREASING, "avg_value_per_holder"),
    "nhhi": (Direction.RISK_INCREASING, "nhhi"),
    "hhi_active": (Direction.RISK_INCREASING, "hhi_active"),
    "hhi_volume": (Direction.RISK_INCREASING, "hhi_volume"),
}

DEFAULT_METRICS: tuple[tuple[str, Direction], ...] = tuple((n, d) for n, (d, _) in METRICS.items())


def metric_value(name: str, asset: AssetSnapshot, derived: DerivedMetrics) -> Optional[float]:
    try:
        attr = METRICS[name][1]
    except KeyError:
        raise UnknownMetric(name) from None
    if hasattr(derived, attr):
        return getattr(derived, attr)
    return float(getattr(asset, attr))


@dataclass(frozen=True)
class MetricBounds:
    lo: Optional[float]
    hi: Optional[float]
    direction: Direction

    @property
    def degenerate(self) -> bool:
        return self.lo is None or self.lo == self.hi


@dataclass(frozen=True)
class NormalizationContext:
    bounds: Mapping[str, MetricBounds]
    reference_tickers: tuple[str, ...]
    warnings: tuple[str, ...] = field(default=())

    def __getitem__(self, name: str) -> MetricBounds:
        try:
            return self.bounds[name]
        except KeyError:
            raise UnknownMetric(name) from None

    def __contains__(self, name: str) -> bool:
        return name in self.bounds


def context_from_columns(
    columns: Mapping[str, Sequence[Optional[float]]],
    directions: Mapping[str, Direction],
    reference_tickers: Sequence[str] = (),
) -> NormalizationContext:
    """Build bounds from raw metric columns. ``None`` entries are ignored."""
    bounds = {}
    warnings = []
    for name, values in columns.items():
        defined = [v for v in values if v is not None]
        if defined:
            lo, hi = min(defined), max(defined)
        else:
            lo = hi = None
        b = MetricBounds(lo, hi, Direction(directions[name]))
        if b.degenerate:
            warnings.append(
                f"metric '{name}' has no spread across the reference set; every asset scores "
                f"{DEGENERATE_SCORE:g} on it"
            )
        bounds[name] = b
    return NormalizationContext(bounds, tuple(reference_tickers), tuple(warnings))


def build_context(
    snapshots: SnapshotSet | Iterable[AssetSnapshot],
    metrics: Iterable[tuple[str, Direction]] = DEFAULT_METRICS,
    include_benchmarks: bool = True,
    derived: Mapping[str, DerivedMetrics] | None = None,
    nhhi_source: str = "holders",
) -> NormalizationContext:
    """Compute per-metric min/max over the reference assets.

    The reference set is every scored asset, plus benchmark assets when
    ``include_benchmarks`` is set. Assets without transfers have no average
    transfer size and do not contribute to that metric's bounds.
    """
    metrics = list(metrics)
    for name, _ in metrics:
        if name not in METRICS:
            raise UnknownMetric(name)
    reference = [a for a in snapshots if include_benchmarks or not a.is_benchmark]
    if not reference:
        raise EmptyReferenceSet("no assets in the normalization reference set")
    if derived is None:
        derived = {a.ticker: derive_metrics(a, nhhi_source) for a in reference}
    columns = {
        name: [metric_value(name, a, derived[a.ticker]) for a in reference] for name, _ in metrics
    }
    return context_from_columns(columns, dict(metrics), [a.ticker for a in reference])


def risk_norm(value: Optional[float], metric: str, ctx: NormalizationContext) -> float:
    """Map a raw value onto 0-100 where 100 is the riskiest end of the reference range.

    Undefined values score 100, values outside the bounds are clamped, and a
    metric with no spread scores 50.
    """
    b = ctx[metric]
    if value is None:
        return UNDEFINED_SCORE
    if b.degenerate:
        return DEGENERATE_SCORE
    span = b.hi - b.lo
    if b.direction is Direction.RISK_INCREASING:
        score = 100.0 * (value - b.lo) / span
    else:
        score = 100.0 * (b.hi - value) / span
    return min(100.0, max(0.0, score)) + 0.0
