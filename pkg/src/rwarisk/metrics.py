"""Per-asset derived indicators: turnover, activity ratios, transfer size and chain HHIs."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

from .errors import ZeroAssetValue
from .snapshot import AssetSnapshot, ChainDistribution

NHHI_SOURCES = ("holders", "active", "volume")


@dataclass(frozen=True)
class DerivedMetrics:
    turnover: float
    active_ratio: float
    transfer_intensity: float
    avg_transfer_size: Optional[float]  # None when the asset had no transfers
    avg_value_per_holder: float
    nhhi: float
    hhi_active: float
    hhi_volume: float

    def as_dict(self) -> dict:
        return asdict(self)


def compute_turnover(a: AssetSnapshot) -> float:
    """30-day transfer volume over asset value; higher means easier exit."""
    if a.asset_value <= 0:
        raise ZeroAssetValue(f"{a.ticker}: turnover is undefined for zero asset value")
    return a.transfer_volume_30d / a.asset_value


def compute_active_ratio(a: AssetSnapshot) -> float:
    # may exceed 1 when addresses churn within the window
    return a.active_addresses_30d / a.holders


def compute_transfer_intensity(a: AssetSnapshot) -> float:
    return a.transfer_count_30d / a.holders


def compute_avg_transfer_size(a: AssetSnapshot) -> Optional[float]:
    if a.transfer_count_30d == 0:
        return None
    return a.transfer_volume_30d / a.transfer_count_30d


def compute_avg_value_per_holder(a: AssetSnapshot) -> float:
    return a.asset_value / a.holders


def compute_hhi(d: ChainDistribution) -> float:
    """Herfindahl index of a chain distribution: the sum of squared shares."""
    return math.fsum(s * s for s in d.shares)


def derive_metrics(a: AssetSnapshot, nhhi_source: str = "holders") -> DerivedMetrics:
    """Bundle every derived indicator for one asset.

    ``nhhi_source`` selects which chain distribution feeds the network
    concentration term of the concentration score (``holders`` by default).
    """
    if nhhi_source not in NHHI_SOURCES:
        raise ValueError(f"nhhi_source must be one of {NHHI_SOURCES}, got {nhhi_source!r}")
    return DerivedMetrics(
        turnover=compute_turnover(a),
        active_ratio=compute_active_ratio(a),
        transfer_intensity=compute_transfer_intensity(a),
        avg_transfer_size=compute_avg_transfer_size(a),
        avg_value_per_holder=compute_avg_value_per_holder(a),
        nhhi=compute_hhi(a.chain_dist(nhhi_source)),
        hhi_active=compute_hhi(a.active_chain_dist),
        hhi_volume=compute_hhi(a.volume_chain_dist),
    )
