"""L/C/M sub-scores, weighted composites, ranking and weight sensitivity."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import InvalidWeights
from .metrics import DerivedMetrics, derive_metrics
from .normalize import NormalizationContext, build_context, risk_norm
from .snapshot import AssetSnapshot, SnapshotSet

WEIGHT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class WeightScheme:
    name: str
    w_l: float
    w_c: float
    w_m: float

    def __post_init__(self):
        weights = (self.w_l, self.w_c, self.w_m)
        if not all(math.isfinite(w) and w >= 0 for w in weights):
            raise InvalidWeights(f"scheme {self.name!r}: weights must be finite and >= 0, got {weights}")
        if abs(math.fsum(weights) - 1.0) > WEIGHT_TOLERANCE:
            raise InvalidWeights(f"scheme {self.name!r}: weights must sum to 1, got {math.fsum(weights)!r}")

    @property
    def weights(self) -> tuple[float, float, float]:
        return self.w_l, self.w_c, self.w_m


EQUAL = WeightScheme("equal", 1 / 3, 1 / 3, 1 / 3)
LIQUIDITY_HEAVY = WeightScheme("liquidity-heavy", 0.50, 0.25, 0.25)
CONCENTRATION_HEAVY = WeightScheme("concentration-heavy", 0.25, 0.50, 0.25)
MARKET_QUALITY_HEAVY = WeightScheme("market-quality-heavy", 0.25, 0.25, 0.50)
CANONICAL_SCHEMES = (EQUAL, LIQUIDITY_HEAVY, CONCENTRATION_HEAVY, MARKET_QUALITY_HEAVY)


@dataclass(frozen=True)
class RiskScores:
    ticker: str
    category: str
    liquidity: float
    concentration: float
    market_quality: float
    composites: Mapping[str, float] = field(default_factory=dict)

    @property
    def lcm(self) -> tuple[float, float, float]:
        return self.liquidity, self.concentration, self.market_quality


@dataclass(frozen=True)
class ScoringConfig:
    include_benchmarks: bool = True
    sort_scheme: str = "equal"
    nhhi_source: str = "holders"


@dataclass(frozen=True)
class ScoreTable:
    rows: tuple[RiskScores, ...]
    benchmark_rows: tuple[RiskScores, ...]
    warnings: tuple[str, ...]
    schemes: tuple[WeightScheme, ...]
    sort_scheme: str
    metrics: Mapping[str, DerivedMetrics]
    context: NormalizationContext
    as_of: str = ""


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values)


def liquidity_score(m: DerivedMetrics, ctx: NormalizationContext) -> float:
    return _mean([
        risk_norm(m.turnover, "turnover", ctx),
        risk_norm(m.active_ratio, "active_ratio", ctx),
        risk_norm(m.transfer_intensity, "transfer_intensity", ctx),
        risk_norm(m.avg_transfer_size, "ats", ctx),
    ])


def concentration_score(holders: int, m: DerivedMetrics, ctx: NormalizationContext) -> float:
    return _mean([
        risk_norm(float(holders), "holders", ctx),
        risk_norm(m.avg_value_per_holder, "avh", ctx),
        risk_norm(m.nhhi, "nhhi", ctx),
    ])


def market_quality_score(m: DerivedMetrics, ctx: NormalizationContext) -> float:
    return _mean([
        risk_norm(m.hhi_active, "hhi_active", ctx),
        risk_norm(m.hhi_volume, "hhi_volume", ctx),
    ])


def composite(l: float, c: float, m: float, scheme: WeightScheme) -> float:
    if not isinstance(scheme, WeightScheme):
        raise InvalidWeights(f"expected a WeightScheme, got {scheme!r}")
    return scheme.w_l * l + scheme.w_c * c + scheme.w_m * m


def score_asset(
    a: AssetSnapshot, m: DerivedMetrics, ctx: NormalizationContext, schemes: Iterable[WeightScheme]
) -> RiskScores:
    l = liquidity_score(m, ctx)
    c = concentration_score(a.holders, m, ctx)
    q = market_quality_score(m, ctx)
    return RiskScores(a.ticker, a.category, l, c, q, {s.name: composite(l, c, q, s) for s in schemes})


def _check_schemes(schemes: Sequence[WeightScheme]) -> None:
    if not schemes:
        raise InvalidWeights("at least one weight scheme is required")
    names = [s.name for s in schemes]
    if len(set(names)) != len(names):
        raise InvalidWeights(f"duplicate scheme names in {names}")


def rank(rows: Iterable[RiskScores], scheme_name: str) -> tuple[RiskScores, ...]:
    """Sort descending by one composite, ties broken by ticker ascending."""
    return tuple(sorted(rows, key=lambda r: (-r.composites[scheme_name], r.ticker)))


def score_set(
    snapshots: SnapshotSet,
    schemes: Sequence[WeightScheme] = CANONICAL_SCHEMES,
    config: ScoringConfig = ScoringConfig(),
) -> ScoreTable:
    """Score every asset against one shared normalization context.

    Benchmarks are scored too but reported in ``benchmark_rows`` rather than
    the ranking.
    """
    schemes = tuple(schemes)
    _check_schemes(schemes)
    if config.sort_scheme not in {s.name for s in schemes}:
        raise InvalidWeights(f"sort scheme {config.sort_scheme!r} is not among the supplied schemes")

    derived = {a.ticker: derive_metrics(a, config.nhhi_source) for a in snapshots}
    ctx = build_context(snapshots, include_benchmarks=config.include_benchmarks, derived=derived)
    scored = [score_asset(a, derived[a.ticker], ctx, schemes) for a in snapshots]

    by_ticker = {r.ticker: r for r in scored}
    rows = rank((by_ticker[a.ticker] for a in snapshots if not a.is_benchmark), config.sort_scheme)
    bench = tuple(by_ticker[a.ticker] for a in snapshots if a.is_benchmark)

    warnings = list(ctx.warnings)
    for a in snapshots:
        if a.chains_defaulted:
            warnings.append(f"{a.ticker}: no chain distributions supplied; assumed a single 'unknown' chain")
        if a.transfer_count_30d == 0:
            warnings.append(f"{a.ticker}: no transfers in the window; average transfer size scored as maximum risk")
    if bench:
        warnings.append(
            "benchmark(s) excluded from ranking: " + ", ".join(r.ticker for r in bench)
            + ("" if config.include_benchmarks else " (and from normalization bounds)")
        )
    return ScoreTable(rows, bench, tuple(warnings), schemes, config.sort_scheme, derived, ctx, snapshots.as_of)


def sensitivity_sweep(
    table: ScoreTable, schemes: Sequence[WeightScheme] = CANONICAL_SCHEMES, include_benchmarks: bool = False
) -> dict[str, dict[str, float]]:
    """Recompute composites under each scheme from stored L/C/M, keeping the table's row order."""
    schemes = tuple(schemes)
    _check_schemes(schemes)
    rows = table.rows + (table.benchmark_rows if include_benchmarks else ())
    return {r.ticker: {s.name: composite(*r.lcm, s) for s in schemes} for r in rows}
