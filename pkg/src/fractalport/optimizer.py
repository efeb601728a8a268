"""Horizon-rescaled covariance and leveraged weight allocation.

Spread returns are treated as synthetic long-only assets. Their daily
covariance is rescaled to the investment horizon through each spread's
Hurst exponent, inverted against the mean-return vector, and the solved
weights are normalized so they sum to the target leverage. Each spread
weight is finally decomposed into per-symbol long/short notional legs in
the 1:chi hedge proportion.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from fractalport.errors import (
    AlignmentError,
    EmptyPortfolioError,
    ParameterError,
    SingularMatrixError,
)
from fractalport.spreads import SpreadSeries

__all__ = [
    "RescaledCovariance",
    "PortfolioWeights",
    "covariance_matrix",
    "rescale_covariance",
    "solve_weights",
    "apply_leverage",
    "compose_legs",
]

logger = logging.getLogger(__name__)

# Ridge added before inversion, relative to the mean diagonal element.
RIDGE_LAMBDA = 1e-8
# Condition number beyond which inversion is refused even after the ridge.
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class RescaledCovariance:
    matrix: np.ndarray
    horizon_days: int
    hursts: tuple[float, ...]


@dataclass(frozen=True)
class PortfolioWeights:
    """Per-spread weights after leverage normalization.

    ``spread_weights`` sums to ``leverage`` over the retained spreads;
    ``scale_k`` is the normalization factor leverage / sum(raw weights);
    ``asset_legs`` maps symbols to signed notional fractions of equity
    (filled by ``compose_legs``).
    """

    spread_weights: np.ndarray
    leverage: float
    scale_k: float
    asset_legs: Mapping[str, float]

    def __post_init__(self):
        w = np.ascontiguousarray(self.spread_weights, dtype=np.float64)
        w.flags.writeable = False
        object.__setattr__(self, "spread_weights", w)
        object.__setattr__(self, "asset_legs", dict(self.asset_legs))


def covariance_matrix(spreads: Sequence[SpreadSeries]) -> np.ndarray:
    """Sample covariance (divisor n) of the aligned daily spread returns."""
    if len(spreads) < 1:
        raise ParameterError("need at least one spread")
    first = spreads[0]
    for s in spreads[1:]:
        if s.dates != first.dates:
            raise AlignmentError(
                f"spread {s.pair()} dates differ from {first.pair()}"
            )
    x = np.vstack([s.deltas for s in spreads])
    xc = x - x.mean(axis=1, keepdims=True)
    cov = (xc @ xc.T) / x.shape[1]
    return (cov + cov.T) / 2.0


def rescale_covariance(
    c: np.ndarray, hursts: Sequence[float], n_days: int
) -> RescaledCovariance:
    """Covariance rescaled to an N-day horizon via per-spread Hurst exponents.

    Element (l, r) is multiplied by N^((H_l + H_r)/2 + 1); with a common H
    this is the N^(H+1) horizon law, and the symmetrized exponent keeps the
    matrix symmetric when exponents differ.
    """
    c = np.asarray(c, dtype=np.float64)
    h = np.asarray(hursts, dtype=np.float64)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise ParameterError(f"covariance must be square, got shape {c.shape}")
    if h.shape != (c.shape[0],):
        raise ParameterError(
            f"{h.size} hurst exponents for a {c.shape[0]}x{c.shape[0]} covariance"
        )
    if np.any((h <= 0.0) | (h >= 1.0)):
        raise ParameterError("hurst exponents must lie in (0, 1)")
    if n_days < 1:
        raise ParameterError(f"horizon must be at least 1 day, got {n_days}")
    exponent = (h[:, None] + h[None, :]) / 2.0 + 1.0
    scaled = c * float(n_days) ** exponent
    eigs = np.linalg.eigvalsh(scaled)
    if eigs.min() < -1e-10 * max(eigs.max(), 1.0):
        logger.warning(
            "rescaled covariance is not positive semidefinite "
            "(min eigenvalue %.3e); mixed-H rescaling does not preserve PSD",
            eigs.min(),
        )
    return RescaledCovariance(
        matrix=scaled, horizon_days=int(n_days), hursts=tuple(float(v) for v in h)
    )


def solve_weights(
    cr: RescaledCovariance,
    mean_deltas: Sequence[float],
    n_days: int,
    labels: Optional[Sequence[str]] = None,
) -> np.ndarray:
    """Raw allocation: inverse rescaled covariance times mean returns times N.

    A ridge of RIDGE_LAMBDA * trace/M is always added before inversion; if
    the matrix is still ill-conditioned the error names the most collinear
    pair of spreads.
    """
    a = np.asarray(cr.matrix, dtype=np.float64)
    mu = np.asarray(mean_deltas, dtype=np.float64)
    m = a.shape[0]
    if mu.shape != (m,):
        raise ParameterError(f"{mu.size} mean returns for {m} spreads")
    ridge = RIDGE_LAMBDA * float(np.trace(a)) / m
    reg = a + ridge * np.eye(m)
    cond = np.linalg.cond(reg)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        names = labels if labels is not None else [str(i) for i in range(m)]
        worst = _most_collinear(reg, names)
        raise SingularMatrixError(
            f"rescaled covariance is singular (condition {cond:.3e}); "
            f"most collinear spreads: {worst[0]} and {worst[1]}"
        )
    return np.linalg.solve(reg, mu) * float(n_days)


def _most_collinear(matrix: np.ndarray, labels: Sequence[str]) -> tuple[str, str]:
    m = matrix.shape[0]
    if m == 1:
        return labels[0], labels[0]
    d = np.sqrt(np.clip(np.diag(matrix), 1e-300, None))
    corr = np.abs(matrix / np.outer(d, d))
    np.fill_diagonal(corr, 0.0)
    i, j = divmod(int(np.argmax(corr)), m)
    return labels[i], labels[j]


def apply_leverage(raw: Sequence[float], leverage: float) -> PortfolioWeights:
    """Clamp negative raw weights to zero and scale the rest to the leverage.

    A negative solved weight would mean shorting the spread, i.e. holding
    its flipped twin, which the selection stage already rejected; such
    weights are zeroed instead.
    """
    if not leverage > 0.0:
        raise ParameterError(f"leverage must be positive, got {leverage}")
    w = np.asarray(raw, dtype=np.float64)
    clamped = np.clip(w, 0.0, None)
    total = float(clamped.sum())
    if total <= 0.0:
        raise EmptyPortfolioError("no spread has a positive weight")
    k = leverage / total
    return PortfolioWeights(
        spread_weights=k * clamped, leverage=float(leverage), scale_k=k, asset_legs={}
    )


def compose_legs(
    weights: PortfolioWeights, spreads: Sequence[SpreadSeries]
) -> dict[str, float]:
    """Per-symbol signed notional fractions from the spread weights.

    A spread of weight w and hedge ratio chi holds long/short notional in
    the 1:chi proportion with gross notional w: long leg +w/(1+chi), short
    leg -w*chi/(1+chi). Exposures of different spreads add per symbol.
    """
    if weights.spread_weights.size != len(spreads):
        raise ParameterError(
            f"{weights.spread_weights.size} weights for {len(spreads)} spreads"
        )
    legs: dict[str, float] = {}
    for w, s in zip(weights.spread_weights, spreads):
        legs[s.long_symbol] = legs.get(s.long_symbol, 0.0) + w / (1.0 + s.chi)
        legs[s.short_symbol] = legs.get(s.short_symbol, 0.0) - w * s.chi / (1.0 + s.chi)
    return dict(sorted(legs.items()))
