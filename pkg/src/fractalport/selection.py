"""Candidate spread generation and greedy fractal-Kelly selection.

Every unordered pair of universe assets yields (at most) one candidate:
the spread is oriented so its mean daily return is positive, its Hurst
exponent is estimated on the cumulative spread path, and the candidate is
ranked by the horizon-adjusted Kelly weight. Selection then repeatedly
takes the highest-ranked remaining candidate, keeps it only if the Hurst
stability screen passes, and on acceptance retires both of its assets so
every symbol appears in at most one selected spread.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from fractalport.errors import (
    DegeneratePairError,
    DegenerateSeriesError,
    DegenerateVolatilityError,
    ParameterError,
)
from fractalport.fbm import HurstEstimate, estimate_hurst
from fractalport.spreads import ReturnSeries, SpreadSeries, build_spread, flip_spread, hedge_ratio

__all__ = [
    "SelectionConfig",
    "CandidateSpread",
    "fractal_kelly_weight",
    "spread_path",
    "build_generating_matrix",
    "select_spreads",
]


@dataclass(frozen=True)
class SelectionConfig:
    horizon_days: int = 126
    hurst_cap: float = 0.5
    max_spreads: Optional[int] = None

    def __post_init__(self):
        if self.horizon_days < 1:
            raise ParameterError(f"horizon must be at least 1 day, got {self.horizon_days}")
        if not 0.0 < self.hurst_cap <= 0.5:
            raise ParameterError(f"hurst cap must lie in (0, 0.5], got {self.hurst_cap}")
        if self.max_spreads is not None and self.max_spreads < 1:
            raise ParameterError(f"max spreads must be positive, got {self.max_spreads}")


@dataclass(frozen=True)
class CandidateSpread:
    spread: SpreadSeries
    hurst: HurstEstimate
    kelly_weight: float


def fractal_kelly_weight(mean_delta: float, theta: float, h: float, n_days: int) -> float:
    """Growth-optimal weight over an N-day horizon with fractal volatility.

    mean_delta * N / (theta^2 * N^(2h)): the mean return accrues linearly
    with the horizon while the variance scales as N^(2h), so anti-persistent
    spreads (h < 0.5) gain weight as the horizon grows. At h = 0.5 this is
    the plain one-period Kelly ratio mean/theta^2 for any horizon.
    """
    if not theta > 0.0:
        raise DegenerateVolatilityError(f"spread volatility must be positive, got {theta}")
    if not 0.0 < h < 1.0:
        raise ParameterError(f"hurst exponent must lie in (0, 1), got {h}")
    if n_days < 1:
        raise ParameterError(f"horizon must be at least 1 day, got {n_days}")
    n = float(n_days)
    return mean_delta * n / (theta * theta * n ** (2.0 * h))


def spread_path(s: SpreadSeries) -> np.ndarray:
    """Cumulative spread path (price-like integral of the daily deltas)."""
    path = np.empty(s.deltas.size + 1, dtype=np.float64)
    path[0] = 0.0
    np.cumsum(s.deltas, out=path[1:])
    return path


def build_generating_matrix(
    universe: Sequence[ReturnSeries], cfg: SelectionConfig
) -> list[CandidateSpread]:
    """Candidates for every unordered asset pair of the universe.

    Pairs whose hedge ratio is degenerate or non-positive are omitted, as
    are pairs whose spread is too flat to size; spreads are oriented so
    the mean daily return is non-negative.
    """
    if len(universe) < 2:
        raise ParameterError(f"universe needs at least 2 assets, got {len(universe)}")
    candidates: list[CandidateSpread] = []
    for ri, rj in itertools.combinations(universe, 2):
        try:
            chi = hedge_ratio(ri, rj)
        except DegeneratePairError:
            continue
        if chi <= 0.0:
            continue
        spread = build_spread(ri, rj, chi)
        if spread.mean_delta < 0.0:
            spread = flip_spread(spread)
        try:
            hurst = estimate_hurst(spread_path(spread))
            weight = fractal_kelly_weight(
                spread.mean_delta, spread.theta, hurst.h, cfg.horizon_days
            )
        except (DegenerateSeriesError, DegenerateVolatilityError):
            continue
        candidates.append(CandidateSpread(spread=spread, hurst=hurst, kelly_weight=weight))
    return candidates


def _accepts(c: CandidateSpread, cap: float) -> bool:
    return (
        c.hurst.h + c.hurst.h_err < cap
        and c.hurst.h_err < c.hurst.h
        and c.spread.mean_delta > 0.0
    )


def select_spreads(
    candidates: Sequence[CandidateSpread], cfg: SelectionConfig
) -> list[CandidateSpread]:
    """Greedy selection of disjoint spreads by descending Kelly weight.

    The top-weighted remaining candidate is accepted only if
    h + h_err < hurst_cap and h_err < h; acceptance retires both of its
    assets, rejection discards just that candidate. Ties in weight break
    lexicographically on (long, short) symbols, so the result is
    deterministic.
    """
    order = sorted(
        candidates,
        key=lambda c: (-c.kelly_weight, c.spread.long_symbol, c.spread.short_symbol),
    )
    used: set[str] = set()
    picked: list[CandidateSpread] = []
    for cand in order:
        if cfg.max_spreads is not None and len(picked) >= cfg.max_spreads:
            break
        if cand.spread.long_symbol in used or cand.spread.short_symbol in used:
            continue
        if _accepts(cand, cfg.hurst_cap):
            picked.append(cand)
            used.add(cand.spread.long_symbol)
            used.add(cand.spread.short_symbol)
    return picked
