"""Snapshot data model, file parsing and emission.

Two input layouts are supported:

* CSV: one row per asset (``ticker,category,asset_value,holders,
  active_addresses_30d,transfer_volume_30d,transfer_count_30d``) plus an
  optional long-format companion file ``ticker,dimension,chain_id,weight``.
* JSON: a list of asset objects (or ``{"as_of": ..., "assets": [...]}``) with
  the same field names and a nested ``chain_distributions`` block.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    AllZeroWeights,
    DuplicateTicker,
    EmptyDistribution,
    SchemaError,
    SnapshotError,
)

ASSET_FIELDS = (
    "ticker",
    "category",
    "asset_value",
    "holders",
    "active_addresses_30d",
    "transfer_volume_30d",
    "transfer_count_30d",
)
CHAIN_FIELDS = ("ticker", "dimension", "chain_id", "weight")
DIMENSIONS = ("holders", "active", "volume")

UNKNOWN_CHAIN = "unknown"
SHARE_SUM_TOLERANCE = 1e-3
# sums this close to 1 are treated as already canonical so re-normalizing is a no-op
_CANONICAL_EPS = 1e-12

PILOT_TICKERS = frozenset(
    {"BUIDL", "BENJI", "OUSG", "USTB", "USDC", "USDY", "HLSCOPE", "STAC", "PAXG", "XAUT"}
)
PILOT_BENCHMARKS = ("USDC",)


class Role(str, Enum):
    SCORED = "scored"
    BENCHMARK = "benchmark"


@dataclass(frozen=True)
class ChainDistribution:
    """Shares of one activity dimension across chains, in input order."""

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise EmptyDistribution("chain distribution has no entries")
        seen = set()
        for chain_id, share in self.entries:
            if not chain_id:
                raise SnapshotError("chain_id must be non-empty")
            if chain_id in seen:
                raise SnapshotError(f"duplicate chain_id {chain_id!r}")
            seen.add(chain_id)
            if not share >= 0 or not math.isfinite(share):
                raise SnapshotError(f"share for {chain_id!r} must be a finite number >= 0")
        total = math.fsum(s for _, s in self.entries)
        if abs(total - 1.0) > SHARE_SUM_TOLERANCE:
            raise SnapshotError(f"chain shares sum to {total:.6f}, expected 1")

    @classmethod
    def single(cls, chain_id: str = UNKNOWN_CHAIN) -> "ChainDistribution":
        return cls(((chain_id, 1.0),))

    @property
    def shares(self) -> list[float]:
        return [s for _, s in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def normalize_chain_shares(raw: Iterable[tuple[str, float]]) -> ChainDistribution:
    """Canonicalize raw per-chain weights (counts, USD amounts or shares) into shares summing to one."""
    raw = [(str(c), float(w)) for c, w in raw]
    if not raw:
        raise EmptyDistribution("chain distribution has no entries")
    for chain_id, w in raw:
        if not math.isfinite(w) or w < 0:
            raise SnapshotError(f"weight for chain {chain_id!r} must be a finite number >= 0")
    weights = [w for _, w in raw]
    total = math.fsum(weights)
    if total <= 0:
        raise AllZeroWeights("all chain weights are zero")

    if abs(total - 1.0) <= _CANONICAL_EPS:
        return ChainDistribution(tuple(raw))
    return ChainDistribution(tuple((c, w / total) for c, w in raw))


def check_share_band(raw: Sequence[tuple[str, float]]) -> None:
    """Reject file weights that are evidently shares but do not sum to one.

    A vector whose entries are all <= 1 with at least one fractional value is
    read as shares. Display rounding (sum within 1e-3 of one) is tolerated;
    anything further off is treated as corrupt rather than silently rescaled.
    """
    weights = [w for _, w in raw]
    if all(w <= 1.0 for w in weights) and any(w != int(w) for w in weights):
        total = math.fsum(weights)
        if abs(total - 1.0) > SHARE_SUM_TOLERANCE:
            raise SnapshotError(f"chain shares sum to {total:.6f}; expected 1 within {SHARE_SUM_TOLERANCE}")


@dataclass(frozen=True)
class AssetSnapshot:
    ticker: str
    category: str
    asset_value: float
    holders: int
    active_addresses_30d: int
    transfer_volume_30d: float
    transfer_count_30d: int
    holder_chain_dist: ChainDistribution = field(default_factory=ChainDistribution.single)
    active_chain_dist: ChainDistribution = field(default_factory=ChainDistribution.single)
    volume_chain_dist: ChainDistribution = field(default_factory=ChainDistribution.single)
    role: Role = Role.SCORED
    # True when no chain block was supplied and the single "unknown" chain was assumed
    chains_defaulted: bool = False

    def __post_init__(self):
        if not self.ticker or self.ticker != self.ticker.upper():
            raise SnapshotError(f"ticker must be a non-empty uppercase string, got {self.ticker!r}")
        for name in ("asset_value", "transfer_volume_30d"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise SnapshotError(f"{self.ticker}: {name} must be a finite number >= 0")
        for name in ("active_addresses_30d", "transfer_count_30d"):
            if getattr(self, name) < 0:
                raise SnapshotError(f"{self.ticker}: {name} must be >= 0")
        if self.holders < 1:
            raise SnapshotError(f"{self.ticker}: holders must be >= 1")
        if self.transfer_volume_30d > 0 and self.transfer_count_30d == 0:
            raise SnapshotError(f"{self.ticker}: positive transfer volume with zero transfers")
        object.__setattr__(self, "role", Role(self.role))

    @property
    def is_benchmark(self) -> bool:
        return self.role is Role.BENCHMARK

    def chain_dist(self, dimension: str) -> ChainDistribution:
        try:
            return {
                "holders": self.holder_chain_dist,
                "active": self.active_chain_dist,
                "volume": self.volume_chain_dist,
            }[dimension]
        except KeyError:
            raise SchemaError(f"unknown chain dimension {dimension!r}") from None


@dataclass(frozen=True)
class SnapshotSet:
    assets: tuple[AssetSnapshot, ...]
    as_of: str = ""

    def __post_init__(self):
        object.__setattr__(self, "assets", tuple(self.assets))
        if len(self.assets) < 2:
            raise SnapshotError("a snapshot set needs at least 2 assets")
        seen = set()
        for a in self.assets:
            if a.ticker in seen:
                raise DuplicateTicker(f"duplicate ticker {a.ticker!r}")
            seen.add(a.ticker)
        if not any(a.role is Role.SCORED for a in self.assets):
            raise SnapshotError("a snapshot set needs at least one scored (non-benchmark) asset")

    def __iter__(self):
        return iter(self.assets)

    def __len__(self) -> int:
        return len(self.assets)

    @property
    def tickers(self) -> list[str]:
        return [a.ticker for a in self.assets]

    def get(self, ticker: str) -> AssetSnapshot:
        for a in self.assets:
            if a.ticker == ticker:
                return a
        raise KeyError(ticker)

    def is_pilot(self) -> bool:
        return set(self.tickers) == PILOT_TICKERS


# -- parsing -----------------------------------------------------------------


def _parse_count(value, name: str, locus: str) -> int:
    try:
        if isinstance(value, bool):
            raise ValueError
        if isinstance(value, str):
            value = value.strip()
            num = int(value) if value.lstrip("-").isdigit() else float(value)
        else:
            num = value
        if isinstance(num, float):
            if not num.is_integer():
                raise ValueError
            num = int(num)
        if not isinstance(num, int):
            raise ValueError
    except (TypeError, ValueError, OverflowError):
        raise SnapshotError(f"{name} must be an integer, got {value!r}", locus) from None
    if num < 0:
        raise SnapshotError(f"{name} must be >= 0, got {num}", locus)
    return num


def _parse_amount(value, name: str, locus: str) -> float:
    try:
        if isinstance(value, bool):
            raise ValueError
        num = float(value.strip() if isinstance(value, str) else value)
    except (TypeError, ValueError):
        raise SnapshotError(f"{name} must be numeric, got {value!r}", locus) from None
    if not math.isfinite(num) or num < 0:
        raise SnapshotError(f"{name} must be a finite number >= 0, got {value!r}", locus)
    return num


def _build_asset(record: dict, locus: str, chains: dict | None, benchmarks) -> AssetSnapshot:
    ticker = str(record["ticker"]).strip().upper()
    if not ticker:
        raise SnapshotError("ticker is empty", locus)
    holders = _parse_count(record["holders"], "holders", locus)
    if holders == 0:
        raise SnapshotError("holders must be >= 1", locus)
    kwargs = dict(
        ticker=ticker,
        category=str(record["category"]).strip(),
        asset_value=_parse_amount(record["asset_value"], "asset_value", locus),
        holders=holders,
        active_addresses_30d=_parse_count(record["active_addresses_30d"], "active_addresses_30d", locus),
        transfer_volume_30d=_parse_amount(record["transfer_volume_30d"], "transfer_volume_30d", locus),
        transfer_count_30d=_parse_count(record["transfer_count_30d"], "transfer_count_30d", locus),
        role=Role.BENCHMARK if ticker in benchmarks else Role.SCORED,
    )
    if chains is None:
        kwargs["chains_defaulted"] = True
    else:
        missing = [d for d in DIMENSIONS if d not in chains]
        if missing:
            raise SchemaError(f"{ticker}: chain distributions missing dimension(s) {', '.join(missing)}", locus)
        for dim, key in zip(DIMENSIONS, ("holder_chain_dist", "active_chain_dist", "volume_chain_dist")):
            try:
                check_share_band(chains[dim])
                kwargs[key] = normalize_chain_shares(chains[dim])
            except SnapshotError as exc:
                raise type(exc)(f"{ticker} {dim} distribution: {exc}", locus) from None
    try:
        return AssetSnapshot(**kwargs)
    except SnapshotError as exc:
        raise type(exc)(str(exc), locus) from None


def _finish(assets: list[AssetSnapshot], as_of: str, where: str) -> SnapshotSet:
    try:
        return SnapshotSet(tuple(assets), as_of)
    except SnapshotError as exc:
        raise type(exc)(str(exc), where) from None


def _check_header(fieldnames, expected: Sequence[str], where: str) -> None:
    if fieldnames is None:
        raise SchemaError("file is empty; a header row is required", f"{where}:1")
    got = [f.strip() for f in fieldnames]
    missing = [f for f in expected if f not in got]
    unknown = [f for f in got if f not in expected]
    if missing:
        raise SchemaError(f"missing column(s): {', '.join(missing)}", f"{where}:1")
    if unknown:
        raise SchemaError(f"unknown column(s): {', '.join(unknown)}", f"{where}:1")
    if len(set(got)) != len(got):
        raise SchemaError("duplicate column names in header", f"{where}:1")


def _read_rows(text: str, expected: Sequence[str], where: str):
    reader = csv.DictReader(io.StringIO(text))
    _check_header(reader.fieldnames, expected, where)
    reader.fieldnames = [f.strip() for f in reader.fieldnames]
    for row in reader:
        locus = f"{where}:{reader.line_num}"
        if None in row:
            raise SchemaError("row has more cells than the header", locus)
        if any(v is None for v in row.values()):
            raise SchemaError("row has fewer cells than the header", locus)
        if not any(v.strip() for v in row.values()):
            continue
        yield locus, row


def read_chains_csv(text: str, where: str = "<chains>") -> dict[str, dict[str, list[tuple[str, float]]]]:
    """Group a long-format chain CSV into ``{ticker: {dimension: [(chain, weight), ...]}}``."""
    out: dict[str, dict[str, list[tuple[str, float]]]] = {}
    for locus, row in _read_rows(text, CHAIN_FIELDS, where):
        ticker = row["ticker"].strip().upper()
        dim = row["dimension"].strip().lower()
        chain_id = row["chain_id"].strip()
        if not ticker:
            raise SchemaError("ticker is empty", locus)
        if dim not in DIMENSIONS:
            raise SchemaError(f"dimension must be one of {', '.join(DIMENSIONS)}, got {dim!r}", locus)
        if not chain_id:
            raise SchemaError("chain_id is empty", locus)
        entries = out.setdefault(ticker, {}).setdefault(dim, [])
        if any(c == chain_id for c, _ in entries):
            raise SnapshotError(f"{ticker} {dim}: duplicate chain_id {chain_id!r}", locus)
        entries.append((chain_id, _parse_amount(row["weight"], "weight", locus)))
    return out


def parse_snapshot_csv(
    text: str,
    chains_text: str | None = None,
    benchmarks: Iterable[str] = (),
    as_of: str = "",
    where: str = "<input>",
    chains_where: str = "<chains>",
) -> SnapshotSet:
    benchmarks = {b.upper() for b in benchmarks}
    chains = read_chains_csv(chains_text, chains_where) if chains_text is not None else {}
    assets = []
    seen: set[str] = set()
    for locus, row in _read_rows(text, ASSET_FIELDS, where):
        ticker = row["ticker"].strip().upper()
        if ticker in seen:
            raise DuplicateTicker(f"duplicate ticker {ticker!r}", locus)
        seen.add(ticker)
        assets.append(_build_asset(row, locus, chains.get(ticker), benchmarks))
    orphans = sorted(set(chains) - seen)
    if orphans:
        raise SchemaError(f"chain rows for unknown ticker(s): {', '.join(orphans)}", chains_where)
    return _finish(assets, as_of, where)


def parse_snapshot_json(
    text: str,
    benchmarks: Iterable[str] = (),
    as_of: str = "",
    where: str = "<input>",
) -> SnapshotSet:
    benchmarks = {b.upper() for b in benchmarks}
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", f"{where}:{exc.lineno}") from None
    if isinstance(doc, dict):
        extra = set(doc) - {"as_of", "assets"}
        if extra or "assets" not in doc:
            raise SchemaError("top-level object must have 'assets' (and optionally 'as_of')", where)
        as_of = str(doc.get("as_of", as_of))
        records = doc["assets"]
    else:
        records = doc
    if not isinstance(records, list):
        raise SchemaError("expected a list of asset objects", where)

    assets = []
    seen: set[str] = set()
    allowed = set(ASSET_FIELDS) | {"chain_distributions"}
    for i, rec in enumerate(records):
        locus = f"{where}: asset[{i}]"
        if not isinstance(rec, dict):
            raise SchemaError("asset entry must be an object", locus)
        missing = [f for f in ASSET_FIELDS if f not in rec]
        unknown = sorted(set(rec) - allowed)
        if missing:
            raise SchemaError(f"missing field(s): {', '.join(missing)}", locus)
        if unknown:
            raise SchemaError(f"unknown field(s): {', '.join(unknown)}", locus)
        ticker = str(rec["ticker"]).strip().upper()
        if ticker in seen:
            raise DuplicateTicker(f"duplicate ticker {ticker!r}", locus)
        seen.add(ticker)
        chains = None
        if rec.get("chain_distributions") is not None:
            chains = _json_chains(rec["chain_distributions"], locus)
        assets.append(_build_asset(rec, locus, chains, benchmarks))
    return _finish(assets, as_of, where)


def _json_chains(block, locus: str) -> dict[str, list[tuple[str, float]]]:
    if not isinstance(block, dict):
        raise SchemaError("chain_distributions must be an object", locus)
    unknown = sorted(set(block) - set(DIMENSIONS))
    if unknown:
        raise SchemaError(f"unknown chain dimension(s): {', '.join(unknown)}", locus)
    out = {}
    for dim, entries in block.items():
        if not isinstance(entries, list):
            raise SchemaError(f"chain_distributions.{dim} must be a list", locus)
        parsed = []
        for e in entries:
            if isinstance(e, dict) and set(e) == {"chain_id", "weight"}:
                chain_id, weight = e["chain_id"], e["weight"]
            elif isinstance(e, (list, tuple)) and len(e) == 2:
                chain_id, weight = e
            else:
                raise SchemaError(
                    f"chain_distributions.{dim} entries must be {{chain_id, weight}} objects", locus
                )
            parsed.append((str(chain_id).strip(), _parse_amount(weight, f"{dim} weight", locus)))
        out[dim] = parsed
    return out


def parse_snapshot_file(
    path,
    format: str | None = None,
    chains_path=None,
    benchmarks: Iterable[str] = (),
    as_of: str = "",
) -> SnapshotSet:
    """Read a snapshot file into a validated :class:`SnapshotSet`.

    ``format`` is ``"csv"`` or ``"json"``; when omitted it is inferred from the
    file suffix. ``chains_path`` only applies to CSV input. Tickers listed in
    ``benchmarks`` get the benchmark role.
    """
    path = Path(path)
    if format is None:
        format = "json" if path.suffix.lower() == ".json" else "csv"
    format = format.lower()
    text = path.read_text(encoding="utf-8")
    if format == "csv":
        chains_text = Path(chains_path).read_text(encoding="utf-8") if chains_path else None
        return parse_snapshot_csv(
            text, chains_text, benchmarks, as_of, where=str(path),
            chains_where=str(chains_path) if chains_path else "<chains>",
        )
    if format == "json":
        if chains_path:
            raise SchemaError("a separate chains file is only supported for CSV input")
        return parse_snapshot_json(text, benchmarks, as_of, where=str(path))
    raise SchemaError(f"unsupported input format {format!r}")


# -- emission ----------------------------------------------------------------


def _num(x) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def emit_snapshot_csv(snapshots: SnapshotSet) -> tuple[str, str]:
    """Return ``(assets_csv, chains_csv)`` text. Defaulted chain blocks are not written."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ASSET_FIELDS)
    for a in snapshots:
        w.writerow([_num(getattr(a, f)) for f in ASSET_FIELDS])
    cbuf = io.StringIO()
    cw = csv.writer(cbuf, lineterminator="\n")
    cw.writerow(CHAIN_FIELDS)
    for a in snapshots:
        if a.chains_defaulted:
            continue
        for dim in DIMENSIONS:
            for chain_id, share in a.chain_dist(dim).entries:
                cw.writerow([a.ticker, dim, chain_id, repr(share)])
    return buf.getvalue(), cbuf.getvalue()


def snapshot_to_records(snapshots: SnapshotSet) -> dict:
    assets = []
    for a in snapshots:
        rec = {f: getattr(a, f) for f in ASSET_FIELDS}
        if not a.chains_defaulted:
            rec["chain_distributions"] = {
                dim: [{"chain_id": c, "weight": s} for c, s in a.chain_dist(dim).entries]
                for dim in DIMENSIONS
            }
        assets.append(rec)
    return {"as_of": snapshots.as_of, "assets": assets}


def emit_snapshot_json(snapshots: SnapshotSet) -> str:
    return json.dumps(snapshot_to_records(snapshots), indent=2) + "\n"


# -- bundled pilot data ------------------------------------------------------

PILOT_AS_OF = "2026-05"


def pilot_paths() -> tuple[Path, Path]:
    """Paths of the bundled pilot snapshot CSV and its chain-distribution companion."""
    base = resources.files("rwarisk") / "data"
    return Path(str(base / "pilot.csv")), Path(str(base / "pilot_chains.csv"))


def load_pilot(benchmarks: Iterable[str] = PILOT_BENCHMARKS) -> SnapshotSet:
    assets, chains = pilot_paths()
    return parse_snapshot_file(assets, "csv", chains, benchmarks=benchmarks, as_of=PILOT_AS_OF)


def with_benchmarks(snapshots: SnapshotSet, tickers: Iterable[str]) -> SnapshotSet:
    """Return a copy where exactly ``tickers`` carry the benchmark role."""
    tickers = {t.upper() for t in tickers}
    unknown = sorted(tickers - set(snapshots.tickers))
    if unknown:
        raise SnapshotError(f"benchmark ticker(s) not in the snapshot: {', '.join(unknown)}")
    assets = [
        replace(a, role=Role.BENCHMARK if a.ticker in tickers else Role.SCORED) for a in snapshots
    ]
    return SnapshotSet(tuple(assets), snapshots.as_of)
