"""Special functions: Mittag-Leffler series, log-gamma, polygamma and constants.

Two flavours of digamma/trigamma are provided.  ``PsiMode.ACCURATE`` is a
full-precision evaluation (argument shifted by recurrence, then the
asymptotic Bernoulli series).  ``PsiMode.PAPER_TRUNCATED`` is the five-term
asymptotic truncation applied directly at the argument with no shifting;
it is deliberately inaccurate for small arguments so that experiments using
it reproduce estimators built on that approximation.
"""

from __future__ import annotations

import enum
import math

import mpmath

from .errors import ConvergenceError, DomainError

__all__ = [
    "EULER_GAMMA",
    "ZETA3",
    "PsiMode",
    "constants",
    "digamma",
    "log_gamma",
    "mittag_leffler",
    "polygamma",
    "trigamma",
]

EULER_GAMMA = 0.5772156649015328606065
ZETA3 = 1.2020569031595942853997

# B_2, B_4, ..., B_18
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
)

# Recurrence shift thresholds for the asymptotic series.
_PSI_SHIFT = 6.0
_POLYGAMMA_SHIFT = 10.0

# mittag_leffler: |tau|**(1/alpha) above this would overflow the largest term.
ML_OVERFLOW_GUARD = 700.0
ML_MAX_TERMS = 10_000
_ML_RTOL = 1e-16
# sum|term| / |sum| beyond which the double-precision pass is re-done in extended precision
ML_CANCELLATION_LIMIT = 16.0
_ML_MAX_PREC = 8192


class PsiMode(enum.Enum):
    """Evaluation mode for :func:`digamma` and :func:`trigamma`."""

    ACCURATE = "accurate"
    PAPER_TRUNCATED = "paper"

    @classmethod
    def parse(cls, value: "PsiMode | str | None") -> "PsiMode":
        if value is None:
            return cls.ACCURATE
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"unknown psi mode {value!r}; use 'accurate' or 'paper'") from None


def constants() -> dict[str, float]:
    return {"euler_gamma": EULER_GAMMA, "zeta3": ZETA3}


def log_gamma(tau: float) -> float:
    """Natural log of the gamma function for ``tau > 0``.

    Backed by :func:`math.lgamma` (C library ``lgamma``), which is accurate to
    a few ulp on the positive axis.
    """
    if not tau > 0.0:
        raise DomainError(f"log_gamma requires tau > 0, got {tau!r}")
    return math.lgamma(tau)


def _check_positive(name: str, tau: float) -> None:
    if not tau > 0.0 or math.isinf(tau):
        raise DomainError(f"{name} requires finite tau > 0, got {tau!r}")


def polygamma(n: int, tau: float) -> float:
    """Polygamma function of order ``n`` (``n=0`` is digamma) for ``tau > 0``.

    Uses ``psi^(n)(x) = psi^(n)(x+1) - (-1)**n * n! / x**(n+1)`` to move the
    argument above a threshold, then the asymptotic expansion

        psi(x)     ~ log x - 1/(2x) - sum_k B_2k / (2k x^2k)
        psi^(n)(x) ~ (-1)^(n+1) [ (n-1)!/x^n + n!/(2 x^(n+1))
                                  + sum_k B_2k (2k+n-1)! / ((2k)! x^(2k+n)) ]
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"polygamma order must be a non-negative integer, got {n!r}")
    n = int(n)
    _check_positive("polygamma", tau)
    x = float(tau)
    threshold = _PSI_SHIFT if n <= 1 else _POLYGAMMA_SHIFT
    n_fact = math.factorial(n)
    sign = -1.0 if n % 2 == 0 else 1.0  # (-1)**(n+1)

    shift = 0.0
    while x < threshold:
        # psi^(n)(x) = psi^(n)(x+1) + (-1)^(n+1) n! / x^(n+1)
        shift += sign * n_fact / x ** (n + 1)
        x += 1.0

    if n == 0:
        inv2 = 1.0 / (x * x)
        series = 0.0
        p = inv2
        for k, b in enumerate(_BERNOULLI, start=1):
            series += b / (2 * k) * p
            p *= inv2
        return shift + math.log(x) - 0.5 / x - series

    total = math.factorial(n - 1) / x**n + n_fact / (2.0 * x ** (n + 1))
    for k, b in enumerate(_BERNOULLI, start=1):
        total += b * math.factorial(2 * k + n - 1) / math.factorial(2 * k) / x ** (2 * k + n)
    return shift + sign * total


def _digamma_truncated(t: float) -> float:
    return math.log(t) - 1.0 / (2.0 * t) - 1.0 / (12.0 * t**2) + 1.0 / (120.0 * t**4) - 1.0 / (252.0 * t**6)


def _trigamma_truncated(t: float) -> float:
    return 1.0 / t + 1.0 / (2.0 * t**2) + 1.0 / (6.0 * t**3) - 1.0 / (30.0 * t**5) + 1.0 / (42.0 * t**7)


def digamma(tau: float, mode: PsiMode | str = PsiMode.ACCURATE) -> float:
    mode = PsiMode.parse(mode)
    _check_positive("digamma", tau)
    if mode is PsiMode.PAPER_TRUNCATED:
        return _digamma_truncated(float(tau))
    return polygamma(0, tau)


def trigamma(tau: float, mode: PsiMode | str = PsiMode.ACCURATE) -> float:
    mode = PsiMode.parse(mode)
    _check_positive("trigamma", tau)
    if mode is PsiMode.PAPER_TRUNCATED:
        return _trigamma_truncated(float(tau))
    return polygamma(1, tau)


def mittag_leffler(alpha: float, nu: float, tau: float) -> float:
    """Two-parameter Mittag-Leffler function ``E_{alpha,nu}(tau)``.

    Sums ``tau**k / Gamma(nu + k*alpha)`` with Kahan compensation.  Terms are
    formed in log space so ``Gamma`` never overflows.  The sum stops once two
    consecutive terms are both below ``1e-16 * |partial sum|``; if that has not
    happened after ``ML_MAX_TERMS`` terms a :class:`ConvergenceError` is raised.

    For ``tau < 0`` the terms cancel: the largest is of order
    ``exp(|tau|**(1/alpha))`` while the sum stays of order one or smaller.
    When ``sum|term| / |sum|`` exceeds ``ML_CANCELLATION_LIMIT`` the same
    series is re-summed in extended precision (``mpmath`` numbers), with the
    working precision raised until the rounding bound
    ``terms * 2**-prec * sum|term|`` is below ``2**-60 * |sum|``.

    Arguments with ``|tau|**(1/alpha) > ML_OVERFLOW_GUARD`` are rejected: the
    largest term would overflow a double.
    """
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"mittag_leffler requires 0 < alpha <= 1, got {alpha!r}")
    if not nu > 0.0:
        raise DomainError(f"mittag_leffler requires nu > 0, got {nu!r}")
    if not math.isfinite(tau):
        raise DomainError(f"mittag_leffler requires finite tau, got {tau!r}")
    if tau == 0.0:
        return 1.0 / math.gamma(nu) if nu < 171.0 else 0.0
    if abs(tau) ** (1.0 / alpha) > ML_OVERFLOW_GUARD:
        raise DomainError(
            f"|tau|**(1/alpha) = {abs(tau) ** (1.0 / alpha):.6g} exceeds the overflow guard {ML_OVERFLOW_GUARD}"
        )
    total, log_abs_sum = _ml_series_double(alpha, nu, tau)
    if tau > 0.0 or log_abs_sum - _log_abs(total) <= math.log(ML_CANCELLATION_LIMIT):
        return total
    return _ml_series_extended(alpha, nu, tau, log_abs_sum - _log_abs(total))


def _log_abs(x: float) -> float:
    return math.log(abs(x)) if x != 0.0 else -math.inf


def _ml_series_double(alpha: float, nu: float, tau: float) -> tuple[float, float]:
    """Kahan-summed series and ``log(sum|term|)``."""
    log_abs = math.log(abs(tau))
    negative = tau < 0.0
    total = 0.0
    comp = 0.0
    # running log-sum-exp of |term|
    log_max, scaled = -math.inf, 0.0
    small_run = 0
    for k in range(ML_MAX_TERMS):
        log_term = k * log_abs - math.lgamma(nu + k * alpha)
        if log_term > log_max:
            scaled = scaled * math.exp(log_max - log_term) + 1.0
            log_max = log_term
        else:
            scaled += math.exp(log_term - log_max)
        term = math.exp(log_term)
        if negative and k % 2 == 1:
            term = -term
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if abs(term) < _ML_RTOL * abs(total):
            small_run += 1
            if small_run >= 2:
                return total, log_max + math.log(scaled)
        else:
            small_run = 0
    raise ConvergenceError(f"Mittag-Leffler series did not converge in {ML_MAX_TERMS} terms (tau={tau!r})")


def _ml_series_extended(alpha: float, nu: float, tau: float, log_cancellation: float) -> float:
    # the cancellation estimate from the double pass may be wrong if the double sum is garbage;
    # the a-posteriori bound below decides when the precision is sufficient
    extra = 32 + (int(log_cancellation / math.log(2.0)) if math.isfinite(log_cancellation) else 64)
    while True:
        prec = 64 + extra
        with mpmath.workprec(prec):
            a, v, x = mpmath.mpf(alpha), mpmath.mpf(nu), mpmath.mpf(tau)
            total = mpmath.mpf(0)
            abs_sum = mpmath.mpf(0)
            power = mpmath.mpf(1)
            small_run = 0
            eps = mpmath.mpf(2) ** -64
            for k in range(ML_MAX_TERMS):
                term = power * mpmath.rgamma(v + k * a)
                total += term
                abs_sum += abs(term)
                if abs(term) < eps * abs(total):
                    small_run += 1
                    if small_run >= 2:
                        break
                else:
                    small_run = 0
                power *= x
            else:
                raise ConvergenceError(
                    f"Mittag-Leffler series did not converge in {ML_MAX_TERMS} terms (tau={tau!r})"
                )
            bound = 8 * k * abs_sum * mpmath.mpf(2) ** -prec
            if bound <= mpmath.mpf(2) ** -60 * abs(total) or prec >= _ML_MAX_PREC:
                return float(total)
            if total == 0:
                extra *= 2
            else:
                extra += 16 + int(mpmath.log(bound / abs(total), 2)) + 60
