"""GARCH(1,1) parameter space, path simulation and return/price transforms.

The process is

    x_t | past ~ N(0, sigma2_t)
    sigma2_t = K + alpha * x_{t-1}**2 + beta * sigma2_{t-1}

with K > 0, alpha >= 0, beta >= 0. It is wide-sense stationary iff
alpha + beta < 1, in which case var(x_t) = K / (1 - alpha - beta).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "GarchParams",
    "SimulatedPath",
    "DJC_PARAMS",
    "DEFAULT_BURN_IN",
    "validate_params",
    "unconditional_variance",
    "simulate",
    "cumulate",
    "log_returns",
]

DEFAULT_BURN_IN = 500

# cap on alpha + beta used only to seed sigma2_1 for non-stationary triples
_INIT_PERSISTENCE_CAP = 0.999


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GarchParams:
    """Parameter triple (K, alpha, beta) of a GARCH(1,1) process."""

    K: float
    alpha: float
    beta: float

    def __post_init__(self):
        vals = (self.K, self.alpha, self.beta)
        try:
            vals = tuple(float(v) for v in vals)
        except (TypeError, ValueError) as exc:
            raise DomainError(f"GARCH parameters must be real numbers: {exc}") from None
        if not all(math.isfinite(v) for v in vals):
            raise DomainError(f"GARCH parameters must be finite, got {vals}")
        K, alpha, beta = vals
        if K <= 0:
            raise DomainError(f"K must be > 0, got {K}")
        if alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {alpha}")
        if beta < 0:
            raise DomainError(f"beta must be >= 0, got {beta}")
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def persistence(self) -> float:
        return self.alpha + self.beta

    def is_stationary(self) -> bool:
        return self.alpha + self.beta < 1.0

    def as_array(self) -> np.ndarray:
        return np.array([self.K, self.alpha, self.beta])


# Dow Jones Composite estimates, daily log returns 1980-02-01 .. 1999-12-31
DJC_PARAMS = GarchParams(K=2.5e-6, alpha=0.0837, beta=0.8898)


def validate_params(K, alpha, beta) -> GarchParams:
    """Build a :class:`GarchParams`, raising :class:`DomainError` on bad input.

    Non-stationary triples are accepted; check ``is_stationary()``.
    """
    return GarchParams(K, alpha, beta)


def unconditional_variance(params: GarchParams) -> float:
    """Long-run variance K / (1 - alpha - beta) of a stationary process."""
    if not params.is_stationary():
        raise DomainError(
            f"unconditional variance undefined for alpha + beta = {params.persistence} >= 1"
        )
    return params.K / (1.0 - params.alpha - params.beta)


@dataclass(frozen=True)
class SimulatedPath:
    """Returns x_t and conditional variances sigma2_t of one simulated run."""

    returns: np.ndarray
    cond_vars: np.ndarray
    seed: int
    burn_in: int
    params: GarchParams

    def __len__(self):
        return len(self.returns)


def _initial_variance(params: GarchParams) -> float:
    if params.is_stationary():
        return unconditional_variance(params)
    return params.K / (1.0 - min(params.persistence, _INIT_PERSISTENCE_CAP))


def simulate(
    params: GarchParams, n: int, seed: int, burn_in: int = DEFAULT_BURN_IN
) -> SimulatedPath:
    """Simulate ``n`` steps of a Gaussian GARCH(1,1) process.

    ``burn_in + n`` steps are generated from sigma2_1 equal to the
    unconditional variance (or K / (1 - 0.999) when non-stationary) and the
    first ``burn_in`` are discarded. Output is a pure function of
    ``(params, n, seed, burn_in)``.
    """
    n = int(n)
    burn_in = int(burn_in)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if burn_in < 0:
        raise DomainError(f"burn_in must be >= 0, got {burn_in}")

    rng = np.random.default_rng(seed)
    total = burn_in + n
    z = rng.standard_normal(total).tolist()
    K, a, b = params.K, params.alpha, params.beta

    x = [0.0] * total
    h = [0.0] * total
    h_t = _initial_variance(params)
    sqrt = math.sqrt
    for t in range(total):
        x_t = sqrt(h_t) * z[t]
        h[t] = h_t
        x[t] = x_t
        h_t = K + a * (x_t * x_t) + b * h_t

    return SimulatedPath(
        returns=_frozen(x[burn_in:]),
        cond_vars=_frozen(h[burn_in:]),
        seed=seed,
        burn_in=burn_in,
        params=params,
    )


def cumulate(returns) -> np.ndarray:
    """Running sum y_n = x_1 + ... + x_n (log-price path from log returns)."""
    x = np.asarray(returns, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DomainError("cumulate needs a non-empty 1-d sequence")
    return np.cumsum(x)


def log_returns(prices) -> np.ndarray:
    """Log returns log(P_t / P_{t-1}) of a strictly positive price series."""
    p = np.asarray(prices, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise DomainError("log_returns needs at least two prices")
    if not np.all(np.isfinite(p)):
        raise DomainError("prices must be finite")
    bad = np.flatnonzero(p <= 0)
    if bad.size:
        raise DomainError(f"prices must be > 0; first offending index {bad[0]} ({p[bad[0]]})")
    return np.diff(np.log(p))
