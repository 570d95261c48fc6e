"""Regenerate ``src/rwarisk/data/pilot_chains.csv``.

Per-chain splits for the pilot assets are not published; only the holder
network HHI of each asset and its final market-quality score are. This script
picks a plausible chain list and base weighting per asset, then tunes an
exponent on the base weights by bisection until the HHI hits the target:

* holders: the published network HHI.
* active / volume: HHIs whose min-max scores against the USDC benchmark
  (the lowest on both) average to the published market-quality score.

Shares are written with 6 decimals, so rebuilt HHIs land within ~1e-6.

    python tools/build_pilot_chains.py
"""

from __future__ import annotations

import csv
from decimal import Decimal
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "rwarisk" / "data" / "pilot_chains.csv"

NHHI = {"BUIDL": 0.4939, "OUSG": 0.6626, "USTB": 0.8141, "USDC": 0.1414, "USDY": 0.2660, "XAUT": 0.9050}
MARKET_QUALITY = {"BUIDL": 22.04, "USTB": 83.01, "OUSG": 57.68, "USDY": 42.54, "XAUT": 92.39}
SINGLE_CHAIN = {"BENJI": "stellar", "HLSCOPE": "polygon", "STAC": "ethereum", "PAXG": "ethereum"}
# USDC activity is the most dispersed in the set and anchors the low end of both HHI bounds
USDC_ACTIVE_HHI = 0.2150
USDC_VOLUME_HHI = 0.1850
# active and volume scores are offset by +/- this many points around the target
SPLIT = 4.0

BASES = {
    "BUIDL": [("ethereum", 40), ("solana", 18), ("aptos", 12), ("avalanche", 10), ("arbitrum", 8), ("optimism", 6), ("polygon", 6)],
    "OUSG": [("ethereum", 60), ("solana", 20), ("polygon", 12), ("xrpl", 8)],
    "USTB": [("ethereum", 80), ("plume", 20)],
    "USDC": [("ethereum", 30), ("solana", 26), ("base", 14), ("arbitrum", 12), ("polygon", 8), ("avalanche", 5), ("optimism", 3), ("noble", 2)],
    "USDY": [("ethereum", 35), ("solana", 25), ("mantle", 15), ("sui", 10), ("aptos", 8), ("arbitrum", 7)],
    "XAUT": [("ethereum", 85), ("tron", 10), ("ton", 5)],
}


def hhi(shares):
    return sum(s * s for s in shares)


def tune(base, target):
    w = [b for _, b in base]

    def shares(t):
        powered = [x**t for x in w]
        tot = sum(powered)
        return [p / tot for p in powered]

    lo, hi = 0.0, 1.0
    while hhi(shares(hi)) < target:
        hi *= 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if hhi(shares(mid)) < target:
            lo = mid
        else:
            hi = mid
    exact = shares((lo + hi) / 2)
    q = [Decimal(repr(s)).quantize(Decimal("0.000001")) for s in exact]
    q[0] += Decimal(1) - sum(q)
    return [(c, str(s)) for (c, _), s in zip(base, q)]


def main():
    rows = []
    tickers = ["BUIDL", "BENJI", "OUSG", "USTB", "USDC", "USDY", "HLSCOPE", "STAC", "PAXG", "XAUT"]
    for t in tickers:
        if t in SINGLE_CHAIN:
            for dim in ("holders", "active", "volume"):
                rows.append((t, dim, SINGLE_CHAIN[t], "1.0"))
            continue
        base = BASES[t]
        if t == "USDC":
            targets = {"holders": NHHI[t], "active": USDC_ACTIVE_HHI, "volume": USDC_VOLUME_HHI}
        else:
            m = MARKET_QUALITY[t]
            a_score, v_score = m + SPLIT, m - SPLIT
            targets = {
                "holders": NHHI[t],
                "active": USDC_ACTIVE_HHI + a_score / 100 * (1 - USDC_ACTIVE_HHI),
                "volume": USDC_VOLUME_HHI + v_score / 100 * (1 - USDC_VOLUME_HHI),
            }
        for dim in ("holders", "active", "volume"):
            for chain, share in tune(base, targets[dim]):
                rows.append((t, dim, chain, share))
    with OUT.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["ticker", "dimension", "chain_id", "weight"])
        w.writerows(rows)
    print(f"wrote {len(rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
