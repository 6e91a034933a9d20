"""Waiting-time analysis of extreme-offense baseball games.

The package treats games in which a team scores twenty or more runs as
arrivals of a point process on a continuous game index, fits an
exponential law to the gaps between arrivals, and provides
goodness-of-fit tests, era comparisons, and forward-looking
probabilities built on that fit.
"""

__version__ = "0.1.0"

from .compare import AnovaReport, TukeyInterval, anova_oneway, tukey_hsd
from .counting import CountingConfig, compute_iats, continuous_index, detect_events
from .domain import Era, EventOccurrence, ExponentialFit, GameRecord, IatSeries
from .errors import DataError, SlugfestError
from .eras import default_eras, partition_and_fit, worst_fit
from .gof import (
    GofReport,
    PValueRange,
    ad_pvalue_range,
    ad_statistic,
    chisq_binned,
    gof_suite,
    ks_pvalue,
    ks_statistic,
    mc_pvalue,
)
from .ingest import load_bundled_corpus, parse_game_log, validate_schedule
from .model import (
    ExponentialIatModel,
    edf,
    exp_cdf,
    exp_pdf,
    exp_quantile,
    fit_mle,
    qq_points,
)
from .predict import horizon_for_prob, prob_within, prob_within_given_elapsed
from .report import AnalysisConfig, run_full_analysis, season_frequency, write_run

__all__ = [
    "AnalysisConfig",
    "AnovaReport",
    "CountingConfig",
    "DataError",
    "Era",
    "EventOccurrence",
    "ExponentialFit",
    "ExponentialIatModel",
    "GameRecord",
    "GofReport",
    "IatSeries",
    "PValueRange",
    "SlugfestError",
    "TukeyInterval",
    "__version__",
    "ad_pvalue_range",
    "ad_statistic",
    "anova_oneway",
    "chisq_binned",
    "compute_iats",
    "continuous_index",
    "default_eras",
    "detect_events",
    "edf",
    "exp_cdf",
    "exp_pdf",
    "exp_quantile",
    "fit_mle",
    "gof_suite",
    "horizon_for_prob",
    "ks_pvalue",
    "ks_statistic",
    "load_bundled_corpus",
    "mc_pvalue",
    "parse_game_log",
    "partition_and_fit",
    "prob_within",
    "prob_within_given_elapsed",
    "qq_points",
    "run_full_analysis",
    "season_frequency",
    "tukey_hsd",
    "validate_schedule",
    "worst_fit",
    "write_run",
]
