"""Parameter estimation for Mittag-Leffler and generalized Mittag-Leffler laws."""

from .distributions import (
    GMLParams,
    LogMomentSet,
    MLParams,
    gml_cdf,
    gml_fractional_moment,
    gml_log_cumulants,
    gml_log_moments,
    gml_log_third_moment,
    ml_fractional_moment,
    ml_log_moments,
    ml_pdf,
)
from .errors import ConvergenceError, DomainError, MlefitError, NoRootError, NonConvergenceError
from .estimators import (
    ConfidenceInterval,
    FitResult,
    LogSummary,
    Method,
    estimate_gml_fractional,
    estimate_gml_logmoment,
    estimate_ml_fractional,
    estimate_ml_logmoment,
    log_summary,
    ml_confidence_intervals,
)
from .harness import CellReport, ExperimentConfig, run_cell, run_experiment, table_config
from .sampling import RngStream, sample_gml, sample_ml
from .special_fn import PsiMode, digamma, log_gamma, mittag_leffler, trigamma

__version__ = "0.1.0"
