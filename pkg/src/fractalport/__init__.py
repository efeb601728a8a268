"""Market-neutral long-short portfolios from beta-neutral pair spreads.

Pipeline: normalized returns -> pairwise hedge ratios -> spread
construction -> Hurst-screened fractal-Kelly selection -> horizon-rescaled
covariance optimization -> walk-forward backtest with transaction costs.
"""
from fractalport.backtest import (
    BacktestConfig,
    BacktestReport,
    WindowResult,
    accrue_costs,
    compute_metrics,
    max_drawdown,
    position_sizing,
    run_walk_forward,
)
from fractalport.errors import (
    AlignmentError,
    DataError,
    DegeneratePairError,
    DegenerateSeriesError,
    DegenerateVolatilityError,
    EmptyPortfolioError,
    FractalPortError,
    InsufficientDataError,
    NumericalError,
    ParameterError,
    ParseError,
    SingularMatrixError,
    ValidationError,
)
from fractalport.fbm import (
    HurstEstimate,
    estimate_hurst,
    generate_fbm,
    rescale_volatility,
)
from fractalport.io import (
    UniverseFile,
    ingest_prices,
    report_to_dict,
    report_to_json,
    universe_info,
    write_prices_wide,
)
from fractalport.kernels import KERNEL_BACKEND
from fractalport.optimizer import (
    PortfolioWeights,
    RescaledCovariance,
    apply_leverage,
    compose_legs,
    covariance_matrix,
    rescale_covariance,
    solve_weights,
)
from fractalport.selection import (
    CandidateSpread,
    SelectionConfig,
    build_generating_matrix,
    fractal_kelly_weight,
    select_spreads,
    spread_path,
)
from fractalport.spreads import (
    PriceSeries,
    ReturnSeries,
    SpreadSeries,
    build_spread,
    compute_returns,
    flip_spread,
    hedge_ratio,
)
from fractalport.synthetic import SyntheticUniverse, make_synthetic_universe

__version__ = "0.1.0"
