"""Parameter types, densities and closed-form moments of the ML and GML laws.

``ML(alpha, delta)`` has Laplace transform ``1 / (1 + (delta*lam)**alpha)``;
``GML(alpha, beta)`` has Laplace transform ``(1 + lam**alpha)**(-beta)``.
Both reduce to the exponential law at ``alpha = 1`` (with ``beta = 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .errors import ConvergenceError, DomainError
from .special_fn import EULER_GAMMA, ZETA3, log_gamma, mittag_leffler, polygamma

__all__ = [
    "GMLParams",
    "LogMomentSet",
    "MLParams",
    "gml_cdf",
    "gml_fractional_moment",
    "gml_log_cumulants",
    "gml_log_moments",
    "gml_log_third_moment",
    "ml_fractional_moment",
    "ml_log_moments",
    "ml_pdf",
]

PI2_6 = math.pi**2 / 6.0

# ml_pdf switches from the series to the integral representation above this t/delta.
PDF_SERIES_LIMIT = 5.0

GML_CDF_MAX_TERMS = 10_000
# Largest allowed term magnitude in the alternating CDF series; rounding error is
# then at most about GML_CDF_MAX_TERM * 2.2e-16 ~ 2e-8.
GML_CDF_MAX_TERM = 1e8


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"alpha must satisfy 0 < α ≤ 1, got {alpha!r}")


@dataclass(frozen=True)
class MLParams:
    """Mittag-Leffler ``ML(alpha, delta)``: tail index and scale."""

    alpha: float
    delta: float

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not (self.delta > 0.0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must satisfy δ > 0, got {self.delta!r}")


@dataclass(frozen=True)
class GMLParams:
    """Generalized Mittag-Leffler ``GML(alpha, beta)``: tail index and shape."""

    alpha: float
    beta: float

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not (self.beta > 0.0 and math.isfinite(self.beta)):
            raise DomainError(f"beta must satisfy β > 0, got {self.beta!r}")


@dataclass(frozen=True)
class LogMomentSet:
    """Mean and central moments 2..4 of a log-transformed variable."""

    mean: float
    variance: float
    third_central: float
    fourth_central: float

    def __post_init__(self):
        if self.variance < 0.0:
            raise DomainError("variance must be non-negative")
        if self.fourth_central < self.variance**2 * (1.0 - 1e-12):
            raise DomainError("fourth central moment must be at least variance**2")

    def as_dict(self) -> dict[str, float]:
        return {
            "mean": self.mean,
            "variance": self.variance,
            "third_central": self.third_central,
            "fourth_central": self.fourth_central,
        }


# ---------------------------------------------------------------------------
# Densities


def _g_kernel(eta: float, alpha: float) -> float:
    s = math.sin(alpha * math.pi)
    return s / (math.pi * (eta**alpha + eta ** (-alpha) + 2.0 * math.cos(alpha * math.pi)))


def ml_pdf_integral(params: MLParams, t: float) -> float:
    """ML density from the mixture integral ``(1/t) ∫ e^-ξ g(t/(δξ)) dξ``.

    Valid for ``alpha < 1``.  Used by :func:`ml_pdf` for large ``t/delta``
    where the alternating series loses all precision.
    """
    a, d = params.alpha, params.delta
    if a == 1.0:
        return math.exp(-t / d) / d

    def integrand(xi):
        if xi == 0.0:
            return 0.0
        return math.exp(-xi) * _g_kernel(t / (d * xi), a)

    # split at the kernel peak (t/(δξ) = 1) to help the adaptive rule
    peak = t / d
    total = 0.0
    for lo, hi in ((0.0, min(peak, 50.0)), (min(peak, 50.0), math.inf)):
        if hi > lo:
            val, _ = integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-11, limit=200)
            total += val
    return total / t


def ml_pdf(params: MLParams, t: float) -> float:
    """Density of ``ML(alpha, delta)`` at ``t > 0``.

    Uses ``t**(alpha-1) delta**(-alpha) E_{alpha,alpha}(-(t/delta)**alpha)``
    for ``t/delta <= PDF_SERIES_LIMIT`` and the integral representation
    beyond.  Near zero the density diverges like ``t**(alpha-1)`` and is
    returned unclamped.
    """
    if not t > 0.0:
        raise DomainError(f"ml_pdf requires t > 0, got {t!r}")
    a, d = params.alpha, params.delta
    if a == 1.0:
        return math.exp(-t / d) / d
    if t / d > PDF_SERIES_LIMIT:
        return ml_pdf_integral(params, t)
    z = (t / d) ** a
    value = t ** (a - 1.0) * d ** (-a) * mittag_leffler(a, a, -z)
    return max(value, 0.0)


def gml_cdf(params: GMLParams, x: float) -> float:
    """CDF of ``GML(alpha, beta)`` from its alternating power series.

    Raises :class:`ConvergenceError` when the largest series term exceeds
    ``GML_CDF_MAX_TERM`` (cancellation would leave fewer than ~8 correct
    digits) or the terms have not died out after ``GML_CDF_MAX_TERMS``.  As a
    rule of thumb the guard allows ``x`` up to about 18 for ``GML(1, 1)``,
    about 17 for ``GML(0.5, 1)`` and less for large ``beta``.
    """
    if not x > 0.0:
        raise DomainError(f"gml_cdf requires x > 0, got {x!r}")
    a, b = params.alpha, params.beta
    log_x = math.log(x)
    lg_b = math.lgamma(b)
    total = 0.0
    comp = 0.0
    small_run = 0
    for k in range(GML_CDF_MAX_TERMS):
        e = a * (k + b)
        log_mag = math.lgamma(k + b) - lg_b - math.lgamma(k + 1.0) + e * log_x - math.lgamma(1.0 + e)
        if log_mag > math.log(GML_CDF_MAX_TERM):
            raise ConvergenceError(
                f"gml_cdf series terms reach {math.exp(min(log_mag, 700.0)):.3g}; x={x!r} is outside the practical range"
            )
        term = math.exp(log_mag)
        if k % 2 == 1:
            term = -term
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) < 1e-17 * max(abs(total), 1e-300):
            small_run += 1
            if small_run >= 2:
                return min(max(total, 0.0), 1.0)
        else:
            small_run = 0
    raise ConvergenceError(f"gml_cdf series did not converge in {GML_CDF_MAX_TERMS} terms (x={x!r})")


# ---------------------------------------------------------------------------
# Fractional moments


def ml_fractional_moment(params: MLParams, q: float) -> float:
    """``E T**q = q π δ**q / (α Γ(1-q) sin(π q/α))`` for ``0 < q < alpha``."""
    a, d = params.alpha, params.delta
    if not (0.0 < q < a):
        raise DomainError(f"q must satisfy 0 < q < α (moments are infinite for q ≥ α), got q={q!r}, α={a!r}")
    return q * math.pi * d**q / (a * math.gamma(1.0 - q) * math.sin(math.pi * q / a))


def gml_fractional_moment(params: GMLParams, q: float) -> float:
    """``E X**q = Γ(1-q/α) Γ(β+q/α) / (Γ(1-q) Γ(β))`` for ``-αβ < q < α``."""
    a, b = params.alpha, params.beta
    if not (-a * b < q < a):
        raise DomainError(f"q must satisfy -αβ < q < α, got q={q!r} (α={a!r}, β={b!r})")
    if q == 0.0:
        return 1.0
    return math.exp(
        log_gamma(1.0 - q / a) + log_gamma(b + q / a) - log_gamma(1.0 - q) - log_gamma(b)
    )


# ---------------------------------------------------------------------------
# Log-moments


def ml_log_moments(params: MLParams) -> LogMomentSet:
    a = params.alpha
    mean = math.log(params.delta) - EULER_GAMMA
    variance = PI2_6 * (2.0 / a**2 - 1.0)
    third = -2.0 * ZETA3
    fourth = math.pi**4 * (a**4 - 20.0 * a**2 + 28.0) / (60.0 * a**4)
    return LogMomentSet(mean, variance, third, fourth)


def gml_log_cumulants(params: GMLParams, k: int) -> float:
    """k-th cumulant of ``log X`` for ``X ~ GML(alpha, beta)``, ``k = 1..4``.

    ``d_k = alpha**-k [psi^(k-1)(beta) + (-1)**k psi^(k-1)(1) (1 - alpha**k)]``
    """
    if k not in (1, 2, 3, 4):
        raise DomainError(f"cumulant order must be in 1..4, got {k!r}")
    a, b = params.alpha, params.beta
    return (polygamma(k - 1, b) + (-1) ** k * _polygamma_at_one(k - 1) * (1.0 - a**k)) / a**k


def _polygamma_at_one(n: int) -> float:
    # psi(1) = -γ, psi'(1) = π²/6, psi''(1) = -2ζ(3), psi'''(1) = π⁴/15
    return (-EULER_GAMMA, PI2_6, -2.0 * ZETA3, math.pi**4 / 15.0)[n]


def gml_log_moments(params: GMLParams) -> LogMomentSet:
    """Mean and central moments of ``log X`` assembled from the cumulants."""
    d1, d2, d3, d4 = (gml_log_cumulants(params, k) for k in (1, 2, 3, 4))
    return LogMomentSet(d1, d2, d3, d4 + 3.0 * d2**2)


def stable_log_raw_moments(alpha: float) -> tuple[float, float, float]:
    """First three raw moments of ``log S`` for the positive stable law ``exp(-lam**alpha)``."""
    c = EULER_GAMMA
    m1 = c * (1.0 / alpha - 1.0)
    m2 = (1.0 / alpha - 1.0) ** 2 * c**2 + PI2_6 * (1.0 / alpha**2 - 1.0)
    m3 = (
        -2.0 * (alpha - 1.0) ** 3 * c**3
        + c * math.pi**2 * (alpha - 1.0) ** 2 * (1.0 + alpha)
        - 4.0 * (alpha**3 - 1.0) * ZETA3
    ) / (2.0 * alpha**3)
    return m1, m2, m3


def gml_log_third_moment(params: GMLParams) -> float:
    """Non-central third moment ``E (log X)**3``.

    Expands ``log X = log(W)/alpha + log(S)`` with ``W ~ Gamma(beta)`` and
    independent positive stable ``S``; the ``log S`` moments are the
    closed forms in :func:`stable_log_raw_moments`.
    """
    a, b = params.alpha, params.beta
    psi0, psi1, psi2 = polygamma(0, b), polygamma(1, b), polygamma(2, b)
    w1 = psi0
    w2 = psi1 + psi0**2
    w3 = psi2 + 3.0 * psi1 * psi0 + psi0**3
    s1, s2, s3 = stable_log_raw_moments(a)
    return w3 / a**3 + 3.0 * w2 * s1 / a**2 + 3.0 * w1 * s2 / a + s3
