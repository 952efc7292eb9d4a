"""Point estimators and confidence intervals for the ML and GML laws.

Log-moment estimators invert the mean and variance of ``log(data)``:

* ML:  ``alpha = 2 pi / sqrt(2 (6 s2 + pi**2))``, ``delta = exp(m + gamma)``
* GML: solve ``m  = gamma (1/alpha - 1) + psi(beta)/alpha`` and
  ``s2 = (pi**2/6)(1/alpha**2 - 1) + psi'(beta)/alpha**2``

Fractional-moment estimators match sample moments ``mean(x**q)`` to their
closed forms; they need ``q < alpha`` and are the baseline being compared
against.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .distributions import PI2_6, GMLParams, gml_fractional_moment
from .errors import DomainError, NoRootError, NonConvergenceError
from .solvers import SolverConfig, find_root, minimize_2d
from .special_fn import EULER_GAMMA, PsiMode, digamma, trigamma

__all__ = [
    "ConfidenceInterval",
    "FitResult",
    "LogSummary",
    "Method",
    "estimate_gml_fractional",
    "estimate_gml_logmoment",
    "estimate_ml_fractional",
    "estimate_ml_logmoment",
    "log_summary",
    "ml_confidence_intervals",
    "ml_fractional_ratio",
    "normal_quantile",
]

GAMMA_3_4 = math.gamma(0.75)

# alpha_F lives on (0.5, 1]: below 0.5 the ratio equation's right side is negative
# and at 0.5 it has a pole.
ML_FRAC_ALPHA_LO = 0.5 + 1e-9
ML_FRAC_ALPHA_HI = 1.0

GML_BETA_BRACKET = (1e-3, 1e3)
GML_BETA_LIMITS = (1e-8, 1e8)
GML_FRAC_BOX = ((0.26, 1.0), (1e-3, 1e3))
GML_FRAC_STARTS = ((0.75, 2.0), (0.5, 10.0))

_ROOT_CONFIG = SolverConfig(tolerance=1e-12, max_iterations=200)
_ML_FRAC_CONFIG = SolverConfig(tolerance=1e-6, max_iterations=200)
_SIMPLEX_CONFIG = SolverConfig(tolerance=1e-6, max_iterations=1000)


class Method(enum.Enum):
    LOG_MOMENT = "log"
    FRACTIONAL_MOMENT = "frac"


@dataclass(frozen=True)
class LogSummary:
    """Sample mean and 1/n variance of log-transformed data."""

    n: int
    mean: float
    variance: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"need at least 2 observations, got n={self.n}")
        if not self.variance >= 0.0:
            raise DomainError(f"variance must be non-negative, got {self.variance!r}")


@dataclass(frozen=True)
class FitResult:
    """Estimates ``(param1, param2)``: ``(alpha, delta)`` for ML, ``(alpha, beta)`` for GML.

    ``param1`` is clamped to 1 when the raw estimate exceeds 1; the unclamped
    value is kept in ``raw_param1``.
    """

    param1: float
    param2: float
    method: Method
    clamped: bool = False
    solver_iterations: int = 0
    converged: bool = True
    raw_param1: float | None = None

    def __post_init__(self):
        if self.raw_param1 is None:
            object.__setattr__(self, "raw_param1", self.param1)

    def as_dict(self) -> dict:
        return {
            "alpha": self.param1,
            "second_param": self.param2,
            "alpha_raw": self.raw_param1,
            "method": self.method.value,
            "clamped": self.clamped,
            "converged": self.converged,
            "solver_iterations": self.solver_iterations,
        }


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError("interval lower bound exceeds upper bound")
        if not 0.0 < self.level < 1.0:
            raise DomainError(f"level must be in (0, 1), got {self.level!r}")

    def as_list(self) -> list[float]:
        return [self.lower, self.upper]


def _positive_array(data) -> np.ndarray:
    x = np.asarray(data, dtype=float).ravel()
    if x.size < 2:
        raise DomainError(f"need at least 2 observations, got {x.size}")
    if not np.all(x > 0.0) or not np.all(np.isfinite(x)):
        bad = int(np.flatnonzero(~((x > 0.0) & np.isfinite(x)))[0])
        raise DomainError(f"datum {bad + 1} must be positive and finite, got {x[bad]!r}")
    return x


def log_summary(data, ddof: int = 0) -> LogSummary:
    """Mean and variance of ``log(data)``.

    The variance divisor is ``n - ddof``; the default ``ddof=0`` gives the
    ``1/n`` variance that the asymptotic intervals are derived for.
    """
    logs = np.log(_positive_array(data))
    if ddof not in (0, 1):
        raise DomainError(f"ddof must be 0 or 1, got {ddof!r}")
    mean = float(logs.mean())
    variance = float(np.sum((logs - mean) ** 2) / (logs.size - ddof))
    return LogSummary(int(logs.size), mean, variance)


def _clamp(alpha: float) -> tuple[float, bool]:
    return (1.0, True) if alpha > 1.0 else (alpha, False)


# ---------------------------------------------------------------------------
# ML


def estimate_ml_logmoment(summary: LogSummary) -> FitResult:
    raw = 2.0 * math.pi / math.sqrt(2.0 * (6.0 * summary.variance + math.pi**2))
    alpha, clamped = _clamp(raw)
    delta = math.exp(summary.mean + EULER_GAMMA)
    return FitResult(alpha, delta, Method.LOG_MOMENT, clamped=clamped, raw_param1=raw)


def ml_fractional_ratio(alpha: float) -> float:
    """Theoretical ``E T**(1/2) / (E T**(1/4))**2`` as a function of alpha (free of delta)."""
    return (
        GAMMA_3_4**2
        * 8.0
        * alpha
        * math.sin(math.pi / (4.0 * alpha)) ** 2
        / (math.pi**1.5 * math.sin(math.pi / (2.0 * alpha)))
    )


def estimate_ml_fractional(data) -> FitResult:
    """Fractional-moment estimator with ``q1 = 1/2`` and ``q2 = 1/4``.

    ``alpha`` solves ``e(1/2) / e(1/4)**2 = ml_fractional_ratio(alpha)`` on
    ``(0.5, 1]``, then ``delta`` averages the two single-moment inversions::

        delta = (4 a² sin²(π/2a) e(1/2)²/π + [4 a Γ(3/4) sin(π/4a) e(1/4)/π]⁴) / 2

    The ratio function falls from ``+inf`` at 0.5 to about 1.0787 at 1.  A
    sample ratio at or below the ``alpha = 1`` value would need ``alpha > 1``;
    the estimate is then the endpoint 1 with ``clamped=True``.
    """
    x = _positive_array(data)
    e_half = float(np.mean(np.sqrt(x)))
    e_quarter = float(np.mean(np.sqrt(np.sqrt(x))))
    ratio = e_half / e_quarter**2
    if not math.isfinite(ratio):
        raise NoRootError(f"sample moment ratio is not finite ({ratio!r})")

    clamped = ratio <= ml_fractional_ratio(ML_FRAC_ALPHA_HI)
    if clamped:
        a, iterations = ML_FRAC_ALPHA_HI, 0
    else:
        root = find_root(
            lambda a: ml_fractional_ratio(a) - ratio, ML_FRAC_ALPHA_LO, ML_FRAC_ALPHA_HI, _ML_FRAC_CONFIG
        )
        a, iterations = root.root, root.iterations
    delta = (
        4.0 * a**2 * math.sin(math.pi / (2.0 * a)) ** 2 * e_half**2 / math.pi
        + (4.0 * a * GAMMA_3_4 * math.sin(math.pi / (4.0 * a)) * e_quarter / math.pi) ** 4
    ) / 2.0
    return FitResult(a, delta, Method.FRACTIONAL_MOMENT, clamped=clamped, solver_iterations=iterations)


def normal_quantile(p: float) -> float:
    """Standard normal quantile (Wichura's AS241 via :class:`statistics.NormalDist`)."""
    return NormalDist().inv_cdf(p)


def ml_confidence_intervals(fit: FitResult, n: int, level: float = 0.95) -> dict[str, ConfidenceInterval]:
    """Asymptotic normal intervals for ``alpha`` and ``delta`` of an ML fit.

    Half-widths are ``z sqrt(a² (32 - 20a² - a⁴) / (40 n))`` and
    ``z sqrt(π² d² (2/a² - 1) / (6 n))``.
    """
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n!r}")
    if not 0.0 < level < 1.0:
        raise DomainError(f"level must be in (0, 1), got {level!r}")
    a, d = fit.param1, fit.param2
    if not 0.0 < a <= 1.0:
        raise DomainError(f"alpha estimate must lie in (0, 1], got {a!r}")
    poly = 32.0 - 20.0 * a**2 - a**4
    assert poly >= 0.0
    z = normal_quantile(1.0 - (1.0 - level) / 2.0)
    ha = z * math.sqrt(a**2 * poly / (40.0 * n))
    hd = z * math.sqrt(math.pi**2 * d**2 * (2.0 / a**2 - 1.0) / (6.0 * n))
    return {
        "alpha_ci": ConfidenceInterval(a - ha, a + ha, level),
        "delta_ci": ConfidenceInterval(d - hd, d + hd, level),
    }


# ---------------------------------------------------------------------------
# GML


def _profile_alpha(beta: float, variance: float, mode: PsiMode) -> float:
    return math.sqrt((PI2_6 + trigamma(beta, mode)) / (variance + PI2_6))


def estimate_gml_logmoment(summary: LogSummary, mode: PsiMode | str = PsiMode.ACCURATE) -> FitResult:
    """Log-moment estimator for ``GML(alpha, beta)``.

    The variance equation gives ``alpha(beta)**2 = (pi²/6 + psi'(beta)) / (s2 + pi²/6)``;
    substituting into the mean equation leaves a scalar equation in
    ``beta`` solved by Brent's method.  The bracket starts at
    ``GML_BETA_BRACKET`` and widens geometrically up to ``GML_BETA_LIMITS``.
    """
    mode = PsiMode.parse(mode)
    m, s2 = summary.mean, summary.variance
    assert s2 + PI2_6 > 0.0

    def mean_gap(beta):
        a = _profile_alpha(beta, s2, mode)
        return EULER_GAMMA * (1.0 / a - 1.0) + digamma(beta, mode) / a - m

    lo, hi = GML_BETA_BRACKET
    f_lo, f_hi = mean_gap(lo), mean_gap(hi)
    while f_lo > 0.0 and lo > GML_BETA_LIMITS[0]:
        lo /= 10.0
        f_lo = mean_gap(lo)
    while f_hi < 0.0 and hi < GML_BETA_LIMITS[1]:
        hi *= 10.0
        f_hi = mean_gap(hi)
    if f_lo > 0.0 or f_hi < 0.0:
        raise NoRootError(
            f"log-moment equation for beta has no sign change on [{lo:g}, {hi:g}] (mean={m!r}, variance={s2!r})"
        )
    root = find_root(mean_gap, lo, hi, _ROOT_CONFIG)
    beta = root.root
    raw = _profile_alpha(beta, s2, mode)
    alpha, clamped = _clamp(raw)
    return FitResult(
        alpha, beta, Method.LOG_MOMENT, clamped=clamped, solver_iterations=root.iterations, raw_param1=raw
    )


def estimate_gml_fractional(data, q1: float = 1.0 / 3.0, q2: float = 1.0 / 4.0) -> FitResult:
    """Fractional-moment estimator for ``GML(alpha, beta)``.

    Minimizes ``sum_l (log mean(x**q_l) - log E X**q_l)**2`` with the simplex
    method over ``alpha in (0.26, 1]`` and ``log(beta)`` in
    ``log(1e-3) .. log(1e3)``.  Points with ``alpha <= q_l`` have no finite
    moment and score ``+inf``.  Starts at ``(0.75, 2)`` and retries from
    ``(0.5, 10)`` if the first run does not converge.
    """
    if not (0.0 < q1 < 1.0 and 0.0 < q2 < 1.0) or q1 == q2:
        raise DomainError(f"q1 and q2 must be distinct values in (0, 1), got {q1!r}, {q2!r}")
    x = _positive_array(data)
    qs = (q1, q2)
    targets = tuple(math.log(float(np.mean(x**q))) for q in qs)

    def objective(alpha, log_beta):
        if alpha <= max(qs):
            return math.inf
        params = GMLParams(alpha, math.exp(log_beta))
        return sum((t - math.log(gml_fractional_moment(params, q))) ** 2 for t, q in zip(targets, qs))

    (a_lo, a_hi), (b_lo, b_hi) = GML_FRAC_BOX
    box = ((a_lo, a_hi), (math.log(b_lo), math.log(b_hi)))
    iterations = 0
    best = None
    for a0, b0 in GML_FRAC_STARTS:
        res = minimize_2d(objective, (a0, math.log(b0)), box, _SIMPLEX_CONFIG, initial_step=(0.05, 0.25))
        iterations += res.iterations
        if best is None or res.value < best.value:
            best = res
        if res.converged:
            best = res
            break
    (alpha, log_beta) = best.point
    fit = FitResult(
        alpha,
        math.exp(log_beta),
        Method.FRACTIONAL_MOMENT,
        solver_iterations=iterations,
        converged=best.converged,
    )
    if not best.converged:
        raise NonConvergenceError("fractional-moment simplex search did not converge", fit)
    return fit
