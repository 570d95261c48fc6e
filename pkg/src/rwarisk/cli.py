"""Command-line entry point: ``rwarisk score``.

Exit codes: 0 success, 1 invalid data or arguments, 2 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from .errors import UnknownMetric
from .report import IN_FORMATS, OUT_FORMATS, RunConfig, emit_report
from .scoring import CANONICAL_SCHEMES, ScoringConfig, WeightScheme, score_set
from .snapshot import PILOT_BENCHMARKS, parse_snapshot_file, pilot_paths, with_benchmarks

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


def parse_weights(specs: Sequence[str]) -> list[WeightScheme]:
    """Parse ``NAME=L,C,M`` (or bare ``L,C,M``, auto-named ``custom1``...) triples."""
    schemes = []
    auto = 0
    for spec in specs:
        name, sep, triple = spec.rpartition("=")
        if not sep:
            auto += 1
            name = f"custom{auto}"
        name = name.strip()
        if not name:
            raise ValueError(f"--weights {spec!r}: empty scheme name")
        parts = triple.split(",")
        if len(parts) != 3:
            raise ValueError(f"--weights {spec!r}: expected three comma-separated weights L,C,M")
        try:
            w = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"--weights {spec!r}: weights must be numbers") from None
        schemes.append(WeightScheme(name, *w))
    return schemes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rwarisk", description="Liquidity/concentration/market-quality risk scores for tokenized assets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score a snapshot file and print ranked tables")
    p.add_argument("--input", type=Path, help="asset snapshot file (default: bundled pilot data)")
    p.add_argument("--chains", type=Path, help="long-format chain distribution CSV (CSV input only)")
    p.add_argument("--in-format", choices=IN_FORMATS, help="input format (default: from file suffix)")
    p.add_argument("--out-format", "--out", dest="out_format", choices=OUT_FORMATS, default="markdown")
    p.add_argument("--benchmark", action="append", metavar="TICKER",
                   help="ticker reported as a benchmark rather than ranked (repeatable)")
    p.add_argument("--weights", action="append", metavar="NAME=L,C,M",
                   help="weight scheme over L, C, M (repeatable; replaces the built-in schemes)")
    p.add_argument("--sort", metavar="SCHEME", help="scheme used for ranking (default: equal, or the first --weights)")
    p.add_argument("--no-benchmark-bounds", action="store_true",
                   help="exclude benchmarks from the min-max normalization bounds")
    p.add_argument("--precision", type=int, default=2, metavar="N", help="decimals in displayed scores (0-6)")
    p.add_argument("--output", type=Path, metavar="PATH", help="write the report here instead of stdout")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    schemes = parse_weights(args.weights) if args.weights else list(CANONICAL_SCHEMES)
    sort = args.sort or ("equal" if not args.weights else schemes[0].name)
    input_path, chains = args.input, args.chains
    if input_path is None:
        input_path, default_chains = pilot_paths()
        chains = chains or default_chains
    return RunConfig(
        input_path=input_path,
        chain_dist_path=chains,
        format_in=args.in_format,
        format_out=args.out_format,
        benchmark_tickers=args.benchmark,
        schemes=schemes,
        sort_scheme=sort,
        include_benchmarks_in_bounds=not args.no_benchmark_bounds,
        precision=args.precision,
        output_path=args.output,
    )


def run(config: RunConfig) -> str:
    """Load, score and render. Raises on invalid data or I/O failure."""
    snapshots = parse_snapshot_file(config.input_path, config.format_in, config.chain_dist_path)
    benchmarks = config.benchmark_tickers
    if benchmarks is None:
        benchmarks = list(PILOT_BENCHMARKS) if snapshots.is_pilot() else []
    if benchmarks:
        snapshots = with_benchmarks(snapshots, benchmarks)
    table = score_set(
        snapshots,
        config.schemes,
        ScoringConfig(include_benchmarks=config.include_benchmarks_in_bounds, sort_scheme=config.sort_scheme),
    )
    text = emit_report(table, config)
    if config.format_out == "csv":
        for w in table.warnings:
            print(f"warning: {w}", file=sys.stderr)
    return text


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        text = run(config)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: cannot access {exc.filename or ''}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, UnknownMetric) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
