"""Explainable liquidity, concentration and market-quality risk scores for tokenized assets."""

__version__ = "0.1.0"

from .errors import (
    AllZeroWeights,
    DuplicateTicker,
    EmptyDistribution,
    EmptyReferenceSet,
    InvalidWeights,
    SchemaError,
    SnapshotError,
    UnknownMetric,
    ZeroAssetValue,
)
from .metrics import DerivedMetrics, compute_hhi, derive_metrics
from .normalize import Direction, NormalizationContext, build_context, risk_norm
from .scoring import (
    CANONICAL_SCHEMES,
    RiskScores,
    ScoreTable,
    ScoringConfig,
    WeightScheme,
    composite,
    score_set,
    sensitivity_sweep,
)
from .snapshot import (
    AssetSnapshot,
    ChainDistribution,
    Role,
    SnapshotSet,
    load_pilot,
    normalize_chain_shares,
    parse_snapshot_file,
)
