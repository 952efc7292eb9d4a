"""Bracketed scalar root finding and a box-constrained 2-D simplex minimizer."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

from .errors import ConvergenceError, DomainError, NoRootError

__all__ = ["MinimizeResult", "RootResult", "SolverConfig", "find_root", "minimize_2d"]

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class SolverConfig:
    tolerance: float = 1e-6
    max_iterations: int = 200

    def __post_init__(self):
        if not self.tolerance > 0.0:
            raise DomainError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.max_iterations < 1:
            raise DomainError(f"max_iterations must be at least 1, got {self.max_iterations!r}")


class RootResult(NamedTuple):
    root: float
    iterations: int


class MinimizeResult(NamedTuple):
    point: tuple[float, float]
    value: float
    converged: bool
    iterations: int = 0


def find_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    config: SolverConfig = SolverConfig(),
) -> RootResult:
    """Brent's method on ``[lo, hi]``.

    Stops when ``|f(x)| <= tolerance`` or the bracket has shrunk below
    ``tolerance``.  Raises :class:`NoRootError` if ``f(lo)`` and ``f(hi)``
    have the same strict sign, :class:`ConvergenceError` if the iteration
    budget runs out.
    """
    tol = config.tolerance
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if math.isnan(fa) or math.isnan(fb):
        raise NoRootError(f"function is NaN at a bracket end ({a!r}, {b!r})")
    if fa == 0.0:
        return RootResult(a, 0)
    if fb == 0.0:
        return RootResult(b, 0)
    if (fa > 0.0) == (fb > 0.0):
        raise NoRootError(f"no sign change on [{a!r}, {b!r}]: f={fa!r}, {fb!r}")

    c, fc = a, fa
    d = e = b - a
    for it in range(1, config.max_iterations + 1):
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(fb) <= tol or abs(xm) <= tol1:
            return RootResult(b, it)
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
        if math.isnan(fb):
            raise ConvergenceError(f"function returned NaN at x={b!r}")
    raise ConvergenceError(f"root finding exceeded {config.max_iterations} iterations")


def _project(p, box):
    return tuple(min(max(x, lo), hi) for x, (lo, hi) in zip(p, box))


def _safe(f, p):
    v = f(*p)
    return v if v == v else math.inf  # NaN -> +inf


def _nelder_mead(f, start, box, tol, max_iter, scale):
    x0 = _project(start, box)
    simplex = [x0]
    for i in range(2):
        step = scale[i]
        p = list(x0)
        p[i] += step
        if p[i] > box[i][1]:
            p[i] = x0[i] - step
        simplex.append(_project(p, box))
    values = [_safe(f, p) for p in simplex]

    for it in range(1, max_iter + 1):
        order = sorted(range(3), key=values.__getitem__)
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        diameter = max(
            math.dist(simplex[i], simplex[j]) for i in range(3) for j in range(i + 1, 3)
        )
        if diameter < tol:
            return simplex[0], values[0], True, it

        best, mid, worst = simplex
        centroid = ((best[0] + mid[0]) / 2.0, (best[1] + mid[1]) / 2.0)

        def along(coef):
            return _project(
                (centroid[0] + coef * (worst[0] - centroid[0]), centroid[1] + coef * (worst[1] - centroid[1])),
                box,
            )

        xr = along(-1.0)
        fr = _safe(f, xr)
        if fr < values[0]:
            xe = along(-2.0)
            fe = _safe(f, xe)
            if fe < fr:
                simplex[2], values[2] = xe, fe
            else:
                simplex[2], values[2] = xr, fr
            continue
        if fr < values[1]:
            simplex[2], values[2] = xr, fr
            continue
        if fr < values[2]:
            xc = along(-0.5)
            fc = _safe(f, xc)
            if fc <= fr:
                simplex[2], values[2] = xc, fc
                continue
        else:
            xc = along(0.5)
            fc = _safe(f, xc)
            if fc < values[2]:
                simplex[2], values[2] = xc, fc
                continue
        # shrink towards the best vertex
        for i in (1, 2):
            p = simplex[i]
            simplex[i] = (best[0] + 0.5 * (p[0] - best[0]), best[1] + 0.5 * (p[1] - best[1]))
            values[i] = _safe(f, simplex[i])

    i = min(range(3), key=values.__getitem__)
    return simplex[i], values[i], False, max_iter


def minimize_2d(
    f: Callable[[float, float], float],
    start: Sequence[float],
    box: Sequence[tuple[float, float]] = ((-math.inf, math.inf), (-math.inf, math.inf)),
    config: SolverConfig = SolverConfig(),
    initial_step: Sequence[float] | None = None,
) -> MinimizeResult:
    """Nelder-Mead minimization of ``f(x, y)`` inside an axis-aligned box.

    Trial points are projected coordinate-wise onto ``box``, so every
    evaluated and returned point is feasible.  Convergence means the simplex
    diameter fell below ``config.tolerance``.  On failure one restart is
    made from a fresh simplex around the best point found; if that also
    fails the result has ``converged=False``.
    """
    box = tuple((float(lo), float(hi)) for lo, hi in box)
    if len(box) != 2 or any(not lo < hi for lo, hi in box):
        raise DomainError(f"box must be two non-degenerate intervals, got {box!r}")
    if initial_step is None:
        initial_step = tuple(0.05 * abs(s) if s != 0.0 else 0.00025 for s in start)
    if not math.isfinite(_safe(f, _project(start, box))):
        raise DomainError(f"objective is not finite at the start point {tuple(start)!r}")

    point, value, ok, iters = _nelder_mead(
        f, start, box, config.tolerance, config.max_iterations, initial_step
    )
    if not ok:
        point, value, ok, more = _nelder_mead(
            f, point, box, config.tolerance, config.max_iterations, initial_step
        )
        iters += more
    return MinimizeResult((float(point[0]), float(point[1])), float(value), ok, iters)
