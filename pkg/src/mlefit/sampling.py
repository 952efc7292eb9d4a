"""Reproducible random variates for the ML and GML laws and their building blocks.

Composite laws are simulated through their mixture representations::

    T = delta * Z * R**(1/alpha)       T ~ ML(alpha, delta)
    X = W**(1/alpha) * S               X ~ GML(alpha, beta)

with ``Z ~ Exp(1)``, ``W ~ Gamma(beta, 1)``, ``S`` positive stable with
Laplace transform ``exp(-lam**alpha)`` and ``R`` the ratio law with density
``sin(pi a) / (a pi (r**2 + 2 r cos(pi a) + 1))``.

Every sampler accepts ``size``; ``size=None`` returns a Python float.
"""

from __future__ import annotations

import hashlib
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .distributions import GMLParams, MLParams
from .errors import DomainError

__all__ = [
    "RngStream",
    "exp_from_uniform",
    "r_from_uniform",
    "sample_exp",
    "sample_gamma",
    "sample_gml",
    "sample_ml",
    "sample_positive_stable",
    "sample_r",
    "stable_from_uniforms",
]


def _derive_seed(master_seed: int, cell_id: int, replicate_id: int) -> int:
    payload = b"mlefit-rng-v1:%d:%d:%d" % (master_seed, cell_id, replicate_id)
    return int.from_bytes(hashlib.blake2b(payload, digest_size=8).digest(), "little")


@dataclass
class RngStream:
    """A deterministic random stream identified by ``(seed, cell_id, replicate_id)``.

    The generator seed is a 64-bit hash of the triple, so streams for
    different paths are independent and any stream can be rebuilt on any
    worker.  A stream is single-owner; do not share one between threads.
    """

    seed: int
    cell_id: int = 0
    replicate_id: int = 0
    generator: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.generator = np.random.Generator(
            np.random.PCG64(_derive_seed(self.seed, self.cell_id, self.replicate_id))
        )

    @classmethod
    def from_entropy(cls) -> "RngStream":
        return cls(int.from_bytes(os.urandom(8), "little"))

    @property
    def path(self) -> tuple[int, int]:
        return (self.cell_id, self.replicate_id)

    def split(self, cell_id: int, replicate_id: int) -> "RngStream":
        """Independent substream of the same master seed."""
        return RngStream(self.seed, cell_id, replicate_id)

    def uniform(self, size=None):
        """Uniform variates on [0, 1)."""
        return self.generator.random(size)


def _scalar(x, size):
    return float(x) if size is None else x


# ---------------------------------------------------------------------------
# Transforms of uniforms


def exp_from_uniform(u):
    """Inverse CDF of Exp(1): ``-log(1 - u)``."""
    return -np.log1p(-np.asarray(u, dtype=float))


def r_from_uniform(u, alpha: float):
    """Inverse CDF of the ratio law R.

    With ``th = alpha*pi`` the CDF is
    ``F(r) = (arctan((r + cos th)/sin th) - (pi/2 - th)) / th``, whose inverse
    ``sin th * tan(th*u + pi/2 - th) - cos th`` simplifies to
    ``sin(th*u) / sin(th*(1-u))``; the latter has no cancellation near 0.
    """
    th = alpha * math.pi
    u = np.asarray(u, dtype=float)
    return np.sin(th * u) / np.sin(th * (1.0 - u))


def stable_from_uniforms(u, e, alpha: float):
    """Kanter's representation of the positive stable law ``exp(-lam**alpha)``.

    ``u`` is uniform on (0, pi) and ``e`` standard exponential::

        A(u) = [sin(a u)**a * sin((1-a) u)**(1-a) / sin u] ** (1/(1-a))
        S = (A(u) / e) ** ((1-a)/a)
    """
    a = alpha
    u = np.asarray(u, dtype=float)
    e = np.asarray(e, dtype=float)
    log_a = (
        a * np.log(np.sin(a * u)) + (1.0 - a) * np.log(np.sin((1.0 - a) * u)) - np.log(np.sin(u))
    ) / (1.0 - a)
    return np.exp((log_a - np.log(e)) * (1.0 - a) / a)


def _open_uniform(rng: RngStream, size):
    # (0, 1): 1 - U with U in [0, 1) excludes 0; reject exact zeros for the other end
    u = 1.0 - rng.uniform(size)
    if size is None:
        while u >= 1.0:
            u = 1.0 - rng.uniform()
        return u
    bad = u >= 1.0
    while np.any(bad):
        u[bad] = 1.0 - rng.uniform(int(bad.sum()))
        bad = u >= 1.0
    return u


# ---------------------------------------------------------------------------
# Building blocks


def sample_exp(rng: RngStream, size=None):
    u = _open_uniform(rng, size)
    return _scalar(exp_from_uniform(u), size)


def sample_gamma(rng: RngStream, beta: float, size=None):
    """Gamma(shape=beta, scale=1) variates.

    Delegates to NumPy's ``standard_gamma`` (Marsaglia-Tsang squeeze for
    shape >= 1, the ``U**(1/beta)`` boost below 1).
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"gamma shape must satisfy β > 0, got {beta!r}")
    x = rng.generator.standard_gamma(beta, size)
    if size is None:
        while x <= 0.0:
            x = rng.generator.standard_gamma(beta)
        return float(x)
    bad = x <= 0.0
    while np.any(bad):
        x[bad] = rng.generator.standard_gamma(beta, int(bad.sum()))
        bad = x <= 0.0
    return x


def sample_positive_stable(rng: RngStream, alpha: float, size=None):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"stable index must satisfy 0 < α ≤ 1, got {alpha!r}")
    if alpha == 1.0:
        return 1.0 if size is None else np.ones(size)
    u = math.pi * _open_uniform(rng, size)
    e = sample_exp(rng, size)
    return _scalar(stable_from_uniforms(u, e, alpha), size)


def sample_r(rng: RngStream, alpha: float, size=None):
    if not 0.0 < alpha <= 1.0:
        raise DomainError(f"ratio-law index must satisfy 0 < α ≤ 1, got {alpha!r}")
    if alpha == 1.0:
        return 1.0 if size is None else np.ones(size)
    u = _open_uniform(rng, size)
    return _scalar(r_from_uniform(u, alpha), size)


# ---------------------------------------------------------------------------
# Composite laws


def sample_ml(rng: RngStream, params: MLParams, size=None):
    """``ML(alpha, delta)`` variates as ``delta * Z * R**(1/alpha)``."""
    z = sample_exp(rng, size)
    if params.alpha == 1.0:
        return params.delta * z
    r = sample_r(rng, params.alpha, size)
    return params.delta * z * r ** (1.0 / params.alpha)


def sample_gml(rng: RngStream, params: GMLParams, size=None):
    """``GML(alpha, beta)`` variates as ``W**(1/alpha) * S``."""
    w = sample_gamma(rng, params.beta, size)
    if params.alpha == 1.0:
        return w
    s = sample_positive_stable(rng, params.alpha, size)
    return w ** (1.0 / params.alpha) * s
