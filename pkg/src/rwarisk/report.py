"""Rendering of score tables as markdown, CSV or JSON."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .metrics import DerivedMetrics
from .scoring import CANONICAL_SCHEMES, RiskScores, ScoreTable, WeightScheme, sensitivity_sweep

OUT_FORMATS = ("markdown", "csv", "json")
IN_FORMATS = ("csv", "json")

# (label, attribute, decimals) in the derived-metrics table
METRIC_COLUMNS = (
    ("Turnover", "turnover", 4),
    ("Active ratio", "active_ratio", 4),
    ("Transfer intensity", "transfer_intensity", 4),
    ("ATS", "avg_transfer_size", 0),
    ("AVH", "avg_value_per_holder", 0),
    ("NHHI", "nhhi", 4),
    ("HHI active", "hhi_active", 4),
    ("HHI volume", "hhi_volume", 4),
)


@dataclass
class RunConfig:
    input_path: Optional[Path] = None
    chain_dist_path: Optional[Path] = None
    format_in: Optional[str] = None
    format_out: str = "markdown"
    benchmark_tickers: Optional[list[str]] = None  # None -> USDC for the pilot data, else none
    schemes: Sequence[WeightScheme] = field(default_factory=lambda: list(CANONICAL_SCHEMES))
    sort_scheme: str = "equal"
    include_benchmarks_in_bounds: bool = True
    precision: int = 2
    output_path: Optional[Path] = None

    def __post_init__(self):
        if not 0 <= self.precision <= 6:
            raise ValueError(f"precision must be between 0 and 6, got {self.precision}")
        if self.format_out not in OUT_FORMATS:
            raise ValueError(f"output format must be one of {', '.join(OUT_FORMATS)}")
        if self.format_in is not None and self.format_in not in IN_FORMATS:
            raise ValueError(f"input format must be one of {', '.join(IN_FORMATS)}")
        if self.sort_scheme not in [s.name for s in self.schemes]:
            raise ValueError(f"sort scheme {self.sort_scheme!r} does not name a configured scheme")


def fmt(x: Optional[float], decimals: int) -> str:
    if x is None:
        return "n/a"
    return f"{x + 0.0:.{decimals}f}"


def _score_cells(r: RiskScores, sort_scheme: str, p: int) -> list[str]:
    return [r.ticker, r.category, fmt(r.liquidity, p), fmt(r.concentration, p),
            fmt(r.market_quality, p), fmt(r.composites[sort_scheme], p)]


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]], numeric_from: int = 1) -> list[str]:
    align = ["---" if i < numeric_from else "---:" for i in range(len(header))]
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join(align) + "|"]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return lines


def _metric_rows(table: ScoreTable, categories: Mapping[str, str]) -> list[list[str]]:
    rows = []
    for ticker, m in table.metrics.items():
        rows.append([ticker, categories[ticker]] + [fmt(getattr(m, attr), d) for _, attr, d in METRIC_COLUMNS])
    return rows


def render_markdown(table: ScoreTable, precision: int = 2) -> str:
    cats = {r.ticker: r.category for r in table.rows + table.benchmark_rows}
    title = "# Risk scores" + (f" (as of {table.as_of})" if table.as_of else "")
    out = [title, "", "## Derived metrics", ""]
    out += _md_table(["Ticker", "Category"] + [c for c, _, _ in METRIC_COLUMNS], _metric_rows(table, cats), 2)

    score_header = ["Ticker", "Category", "L", "C", "M", "Composite"]
    out += ["", f"## Ranking (composite: {table.sort_scheme})", ""]
    out += _md_table(score_header, [_score_cells(r, table.sort_scheme, precision) for r in table.rows], 2)
    out += ["", "## Benchmarks", ""]
    if table.benchmark_rows:
        out += _md_table(score_header, [_score_cells(r, table.sort_scheme, precision) for r in table.benchmark_rows], 2)
    else:
        out.append("_none_")

    sweep = sensitivity_sweep(table, table.schemes)
    out += ["", "## Weight sensitivity", ""]
    names = [s.name for s in table.schemes]
    out += _md_table(["Ticker"] + names, [[t] + [fmt(v[n], precision) for n in names] for t, v in sweep.items()])

    out += ["", "## Warnings", ""]
    out += [f"- {w}" for w in table.warnings] or ["_none_"]
    return "\n".join(out) + "\n"


def render_csv(table: ScoreTable, precision: int = 2) -> str:
    """One row per asset; ``section`` separates the ranking from benchmarks."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = [s.name for s in table.schemes]
    w.writerow(["section", "rank", "ticker", "category", "L", "C", "M"] + names + [a for _, a, _ in METRIC_COLUMNS])
    sections = [("ranked", r, i + 1) for i, r in enumerate(table.rows)]
    sections += [("benchmark", r, "") for r in table.benchmark_rows]
    for section, r, rank in sections:
        m = table.metrics[r.ticker]
        w.writerow(
            [section, rank, r.ticker, r.category]
            + [fmt(v, precision) for v in r.lcm]
            + [fmt(r.composites[n], precision) for n in names]
            + [fmt(getattr(m, a), d) for _, a, d in METRIC_COLUMNS]
        )
    return buf.getvalue()


def _json_row(r: RiskScores, m: DerivedMetrics, p: int) -> dict:
    values = {"L": r.liquidity, "C": r.concentration, "M": r.market_quality, **r.composites}
    return {
        "ticker": r.ticker,
        "category": r.category,
        "scores": values,
        "display": {k: fmt(v, p) for k, v in values.items()},
        "metrics": m.as_dict(),
    }


def render_json(table: ScoreTable, precision: int = 2) -> str:
    doc = {
        "as_of": table.as_of,
        "sort_scheme": table.sort_scheme,
        "precision": precision,
        "schemes": [{"name": s.name, "weights": list(s.weights)} for s in table.schemes],
        "normalization": {
            "reference_tickers": list(table.context.reference_tickers),
            "bounds": {
                k: {"min": b.lo, "max": b.hi, "direction": b.direction.value}
                for k, b in table.context.bounds.items()
            },
        },
        "ranked": [_json_row(r, table.metrics[r.ticker], precision) for r in table.rows],
        "benchmarks": [_json_row(r, table.metrics[r.ticker], precision) for r in table.benchmark_rows],
        "warnings": list(table.warnings),
    }
    return json.dumps(doc, indent=2) + "\n"


def emit_report(table: ScoreTable, config: RunConfig) -> str:
    render = {"markdown": render_markdown, "csv": render_csv, "json": render_json}[config.format_out]
    return render(table, config.precision)
