"""Command-line interface.

Subcommands: ``hurst`` (exponent of one series), ``select`` (spread
selection over a date range), ``backtest`` (walk-forward report) and
``make-fixture`` (synthetic universe CSV). Exit codes: 0 success,
2 configuration error, 3 data error, 4 numerical error.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from fractalport.backtest import BacktestConfig, run_walk_forward
from fractalport.errors import (
    DataError,
    FractalPortError,
    NumericalError,
    ParameterError,
)
from fractalport.fbm import estimate_hurst
from fractalport.io import (
    SCHEMA_VERSION,
    ingest_prices,
    report_to_json,
    write_equity_csv,
    write_prices_wide,
)
from fractalport.selection import SelectionConfig, build_generating_matrix, select_spreads
from fractalport.spreads import PriceSeries, compute_returns
from fractalport.synthetic import make_synthetic_universe

__all__ = ["main"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractalport",
        description="Market-neutral long-short portfolio construction and backtesting",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_hurst = sub.add_parser("hurst", help="estimate the Hurst exponent of one series")
    p_hurst.add_argument("--input", required=True, help="CSV file")
    group = p_hurst.add_mutually_exclusive_group(required=True)
    group.add_argument("--symbol", help="price column/symbol of a price CSV")
    group.add_argument("--column", help="numeric column name of a generic CSV")

    p_select = sub.add_parser("select", help="rank and select spreads on one window")
    p_select.add_argument("--prices", required=True, help="price CSV (long or wide)")
    p_select.add_argument("--start", required=True, help="first date (ISO) of the window")
    p_select.add_argument("--end", required=True, help="last date (ISO) of the window")
    p_select.add_argument("--horizon-days", type=int, default=126)
    p_select.add_argument("--hurst-cap", type=float, default=0.5)
    p_select.add_argument("--max-spreads", type=int, default=None)
    p_select.add_argument("--output", default=None, help="write JSON here instead of stdout")

    p_bt = sub.add_parser("backtest", help="walk-forward out-of-sample backtest")
    p_bt.add_argument("--prices", required=True, help="price CSV (long or wide)")
    p_bt.add_argument("--benchmark", required=True, help="benchmark symbol in the CSV")
    p_bt.add_argument("--train-days", type=int, default=126)
    p_bt.add_argument("--test-days", type=int, default=126)
    p_bt.add_argument("--leverage", type=float, default=2.0)
    p_bt.add_argument("--capital", type=float, default=100_000.0)
    p_bt.add_argument("--commission-per-share", type=float, default=0.005)
    p_bt.add_argument("--overnight-rate", type=float, default=0.01)
    p_bt.add_argument("--hurst-cap", type=float, default=0.5)
    p_bt.add_argument("--no-reinvest", action="store_true")
    p_bt.add_argument("--output", required=True, help="report JSON path")
    p_bt.add_argument("--equity-csv", default=None, help="optional daily equity CSV")
    # Reserved for fixture workflows; the pipeline itself is deterministic.
    p_bt.add_argument("--seed", type=int, default=None)

    p_fix = sub.add_parser("make-fixture", help="generate a synthetic universe CSV")
    p_fix.add_argument("--out", required=True, help="output wide-format CSV")
    p_fix.add_argument("--assets", type=int, default=10)
    p_fix.add_argument("--days", type=int, default=2520)
    p_fix.add_argument("--pairs", type=int, default=3)
    p_fix.add_argument("--seed", type=int, default=3)
    return parser


def _cmd_hurst(args) -> int:
    if args.symbol:
        series = {p.symbol: p for p in ingest_prices(args.input)}
        if args.symbol not in series:
            raise DataError(
                f"symbol {args.symbol!r} not found; available: {sorted(series)}"
            )
        values = series[args.symbol].prices
    else:
        values = _read_column(args.input, args.column)
    est = estimate_hurst(values)
    print(
        json.dumps(
            {
                "h": est.h,
                "h_err": est.h_err,
                "n_scales": est.n_scales,
                "clamped": est.clamped,
            },
            sort_keys=True,
        )
    )
    return EXIT_OK


def _read_column(path: str, column: str) -> np.ndarray:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or column not in reader.fieldnames:
            raise DataError(
                f"column {column!r} not found; available: {reader.fieldnames}"
            )
        values = []
        for line_no, row in enumerate(reader, start=2):
            cell = (row[column] or "").strip()
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise DataError(f"line {line_no}: bad value {cell!r}") from None
    return np.asarray(values, dtype=np.float64)


def _cmd_select(args) -> int:
    cfg = SelectionConfig(
        horizon_days=args.horizon_days,
        hurst_cap=args.hurst_cap,
        max_spreads=args.max_spreads,
    )
    all_series = ingest_prices(args.prices)
    universe = []
    for p in all_series:
        keep = [i for i, d in enumerate(p.dates) if args.start <= d <= args.end]
        if len(keep) < 2:
            continue
        window = PriceSeries(
            symbol=p.symbol,
            dates=tuple(p.dates[i] for i in keep),
            prices=p.prices[keep],
        )
        universe.append(compute_returns(window, entry_index=0))
    if len(universe) < 2:
        raise DataError(
            f"fewer than 2 symbols have data in [{args.start}, {args.end}]"
        )
    selected = select_spreads(build_generating_matrix(universe, cfg), cfg)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "start": args.start,
        "end": args.end,
        "horizon_days": cfg.horizon_days,
        "hurst_cap": cfg.hurst_cap,
        "spreads": [
            {
                "long_symbol": c.spread.long_symbol,
                "short_symbol": c.spread.short_symbol,
                "chi": c.spread.chi,
                "hurst": c.hurst.h,
                "hurst_err": c.hurst.h_err,
                "kelly_weight": c.kelly_weight,
                "mean_delta": c.spread.mean_delta,
                "theta": c.spread.theta,
            }
            for c in selected
        ],
    }
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_backtest(args) -> int:
    cfg = BacktestConfig(
        train_days=args.train_days,
        test_days=args.test_days,
        leverage=args.leverage,
        initial_capital=args.capital,
        commission_per_share=args.commission_per_share,
        overnight_rate_annual=args.overnight_rate,
        benchmark_symbol=args.benchmark,
        hurst_cap=args.hurst_cap,
        reinvest=not args.no_reinvest,
    )
    all_series = ingest_prices(args.prices)
    by_symbol = {p.symbol: p for p in all_series}
    if cfg.benchmark_symbol not in by_symbol:
        raise DataError(
            f"benchmark symbol {cfg.benchmark_symbol!r} not in price file; "
            f"available: {sorted(by_symbol)}"
        )
    benchmark = by_symbol[cfg.benchmark_symbol]
    universe = [p for p in all_series if p.symbol != cfg.benchmark_symbol]
    report = run_walk_forward(universe, benchmark, cfg)
    Path(args.output).write_text(report_to_json(report, cfg))
    if args.equity_csv:
        write_equity_csv(args.equity_csv, report)
    _print_summary(report)
    return EXIT_OK


def _fmt(value, pct: bool = True) -> str:
    if value is None:
        return "n/a"
    return f"{100 * value:.2f}%" if pct else f"{value:.3f}"


def _print_summary(report) -> None:
    rows = [
        ("windows", str(len(report.windows))),
        ("cumulative return", _fmt(report.cumulative_return)),
        ("annual return (reinvested)", _fmt(report.annual_return_reinvested)),
        ("annual return (single)", _fmt(report.annual_return_single)),
        ("annual volatility", _fmt(report.annual_volatility)),
        ("sharpe", _fmt(report.sharpe, pct=False)),
        ("max drawdown", _fmt(report.max_drawdown)),
        ("benchmark correlation", _fmt(report.benchmark_correlation)),
        ("market neutrality", _fmt(report.market_neutrality)),
        ("avg max weight", _fmt(report.avg_max_weight)),
        ("assets held (min-max)", f"{report.asset_count_range[0]}-{report.asset_count_range[1]}"),
    ]
    width = max(len(k) for k, _ in rows)
    for key, value in rows:
        print(f"{key:<{width}}  {value}")


def _cmd_make_fixture(args) -> int:
    universe = make_synthetic_universe(
        n_assets=args.assets, n_days=args.days, seed=args.seed, n_pairs=args.pairs
    )
    write_prices_wide(args.out, universe.prices + [universe.benchmark])
    pairs = ", ".join(f"{a}/{b}" for a, b in universe.planted_pairs)
    print(
        f"wrote {args.out}: {args.assets} assets + benchmark "
        f"{universe.benchmark.symbol}, {args.days} days, planted pairs {pairs}"
    )
    return EXIT_OK


_HANDLERS = {
    "hurst": _cmd_hurst,
    "select": _cmd_select,
    "backtest": _cmd_backtest,
    "make-fixture": _cmd_make_fixture,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ParameterError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FractalPortError as exc:  # base-class fallback
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
