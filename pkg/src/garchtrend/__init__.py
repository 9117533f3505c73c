"""Simulate, fit and detrend GARCH(1,1) series; Monte Carlo studies of
how polynomial detrending perturbs the estimated parameters."""

from .detrend import PolyFit, detrend, diff_returns, fit_polynomial, trend_degree
from .ensemble import (
    ComposedSeries,
    EnsembleStats,
    beta_sweep_experiment,
    compose_series,
    detrend_experiment,
    ensemble_stats,
    intrinsic_variability_experiment,
    replicate_seed,
)
from .errors import DataFormatError, DegenerateDataError, DomainError, GarchTrendError
from .garch import (
    DJC_PARAMS,
    GarchParams,
    SimulatedPath,
    cumulate,
    log_returns,
    simulate,
    unconditional_variance,
    validate_params,
)
from .mle import (
    FitOptions,
    FitResult,
    InitStrategy,
    default_init,
    fit,
    neg_log_likelihood,
    nll_gradient,
)
from .trend import (
    TrendSeries,
    TrendSpec,
    amplitude_ratio,
    eval_trend,
    sample_ratio,
    sample_spec,
    scale_to_ratio,
)

__version__ = "0.1.0"
