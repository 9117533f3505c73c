"""Gaussian maximum likelihood for GARCH(1,1).

The conditional variance recursion is a first-order linear filter in
sigma2_t, so both the variance path and its parameter sensitivities are
evaluated with :func:`scipy.signal.lfilter` rather than a Python loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.signal import lfilter
from scipy.special import expit, logit

from .errors import DegenerateDataError, DomainError
from .garch import GarchParams

__all__ = [
    "InitStrategy",
    "FitOptions",
    "FitResult",
    "MIN_FIT_LENGTH",
    "conditional_variances",
    "neg_log_likelihood",
    "nll_gradient",
    "default_init",
    "fit",
]

MIN_FIT_LENGTH = 50
_LOG_2PI = math.log(2.0 * math.pi)
# keeps the logit reparameterization finite for starts on the boundary
_EDGE = 1e-8


class InitStrategy(str, Enum):
    VARIANCE_TARGETING = "variance-targeting"
    USER_SUPPLIED = "user-supplied"


@dataclass(frozen=True)
class FitOptions:
    max_iterations: int = 500
    tolerance: float = 1e-8
    boundary_margin: float = 1.0 - 1e-6
    init_strategy: InitStrategy = InitStrategy.VARIANCE_TARGETING

    def __post_init__(self):
        if not self.tolerance > 0:
            raise DomainError(f"tolerance must be > 0, got {self.tolerance}")
        if not 0 < self.boundary_margin < 1:
            raise DomainError(f"boundary_margin must lie in (0, 1), got {self.boundary_margin}")
        if int(self.max_iterations) < 1:
            raise DomainError(f"max_iterations must be >= 1, got {self.max_iterations}")
        object.__setattr__(self, "init_strategy", InitStrategy(self.init_strategy))


@dataclass(frozen=True)
class FitResult:
    params: GarchParams
    log_likelihood: float
    converged: bool
    iterations: int
    init_used: GarchParams


def _check_inputs(returns, init_var) -> np.ndarray:
    x = np.asarray(returns, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise DomainError("returns must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(x)):
        raise DomainError("returns must be finite")
    if not (math.isfinite(init_var) and init_var > 0):
        raise DomainError(f"init_var must be finite and > 0, got {init_var}")
    return x


def _variances(K, alpha, beta, x, init_var):
    sig2 = np.empty_like(x)
    sig2[0] = init_var
    if x.size > 1:
        drive = K + alpha * x[:-1] ** 2
        sig2[1:] = lfilter([1.0], [1.0, -beta], drive, zi=[beta * init_var])[0]
    return sig2


def conditional_variances(params: GarchParams, returns, init_var: float) -> np.ndarray:
    """sigma2_t for t = 1..n given sigma2_1 = ``init_var``."""
    x = _check_inputs(returns, init_var)
    return _variances(params.K, params.alpha, params.beta, x, init_var)


def _nll_and_grad(K, alpha, beta, x, init_var, with_grad=True):
    sig2 = _variances(K, alpha, beta, x, init_var)
    x2 = x * x
    nll = 0.5 * (x.size * _LOG_2PI + np.sum(np.log(sig2)) + np.sum(x2 / sig2))
    if not with_grad:
        return nll, None
    # d nll / d sigma2_t
    w = 0.5 * (1.0 / sig2 - x2 / (sig2 * sig2))
    grad = np.zeros(3)
    if x.size > 1:
        a = [1.0, -beta]
        dK = lfilter([1.0], a, np.ones(x.size - 1))
        dalpha = lfilter([1.0], a, x2[:-1])
        dbeta = lfilter([1.0], a, sig2[:-1])
        w1 = w[1:]
        grad[:] = (w1 @ dK, w1 @ dalpha, w1 @ dbeta)
    return nll, grad


def neg_log_likelihood(params: GarchParams, returns, init_var: float) -> float:
    """Gaussian negative log-likelihood 1/2 sum[log(2 pi sigma2_t) + x_t^2 / sigma2_t]."""
    x = _check_inputs(returns, init_var)
    return float(_nll_and_grad(params.K, params.alpha, params.beta, x, init_var, False)[0])


def nll_gradient(params: GarchParams, returns, init_var: float) -> np.ndarray:
    """Analytic gradient of :func:`neg_log_likelihood` w.r.t. (K, alpha, beta).

    Uses the recursive sensitivities
    d sigma2_t = (1, x_{t-1}^2, sigma2_{t-1}) + beta * d sigma2_{t-1},
    with d sigma2_1 = 0 since sigma2_1 is fixed.
    """
    x = _check_inputs(returns, init_var)
    return _nll_and_grad(params.K, params.alpha, params.beta, x, init_var)[1]


def _sample_variance(x: np.ndarray) -> float:
    v = float(np.var(x))
    if not v > 0:
        raise DegenerateDataError("series has zero sample variance")
    return v


def default_init(returns) -> GarchParams:
    """Variance-targeting start: alpha=0.05, beta=0.85, K=var(x) * (1 - 0.9)."""
    x = np.asarray(returns, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DegenerateDataError("need at least two returns to estimate a variance")
    alpha0, beta0 = 0.05, 0.85
    return GarchParams(_sample_variance(x) * (1.0 - alpha0 - beta0), alpha0, beta0)


class _Reparam:
    """Map theta in R^3 onto {K > 0, alpha, beta >= 0, alpha + beta <= cap}.

    K = exp(t0); alpha + beta = cap * expit(t1); alpha / (alpha + beta) = expit(t2).
    """

    def __init__(self, cap):
        self.cap = cap

    def to_params(self, theta):
        total = self.cap * expit(theta[1])
        share = expit(theta[2])
        return math.exp(theta[0]), total * share, total * (1.0 - share)

    def to_theta(self, K, alpha, beta):
        total = alpha + beta
        u = min(max(total / self.cap, _EDGE), 1.0 - _EDGE)
        share = alpha / total if total > 0 else 0.5
        share = min(max(share, _EDGE), 1.0 - _EDGE)
        return np.array([math.log(K), logit(u), logit(share)])

    def chain(self, theta, grad):
        K, alpha, beta = self.to_params(theta)
        s1 = expit(theta[1])
        s2 = expit(theta[2])
        total = alpha + beta
        dshare = total * s2 * (1.0 - s2)
        return np.array([
            grad[0] * K,
            (1.0 - s1) * (grad[1] * alpha + grad[2] * beta),
            dshare * (grad[1] - grad[2]),
        ])


def fit(
    returns,
    options: Optional[FitOptions] = None,
    init: Optional[GarchParams] = None,
) -> FitResult:
    """Maximum likelihood estimate of (K, alpha, beta).

    The series is standardized to unit variance before optimizing, so the
    estimate is exactly scale-equivariant; sigma2_1 is the sample variance.
    Non-convergence is reported through ``FitResult.converged``.
    """
    options = options or FitOptions()
    x = np.asarray(returns, dtype=float)
    if x.ndim != 1:
        raise DomainError("returns must be 1-d")
    if x.size < MIN_FIT_LENGTH:
        raise DomainError(f"need at least {MIN_FIT_LENGTH} returns to fit, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DomainError("returns must be finite")
    var = _sample_variance(x)

    if init is None:
        if options.init_strategy is InitStrategy.USER_SUPPLIED:
            raise DomainError("init_strategy is user-supplied but no init was given")
        init = default_init(x)
    if init.persistence > options.boundary_margin:
        raise DomainError(
            f"initial alpha + beta = {init.persistence} exceeds cap {options.boundary_margin}"
        )

    z = x / math.sqrt(var)
    z_var = float(np.var(z))
    n = z.size
    rp = _Reparam(options.boundary_margin)

    def objective(theta):
        K, a, b = rp.to_params(theta)
        f, g = _nll_and_grad(K, a, b, z, z_var)
        if not math.isfinite(f):
            return np.inf, np.zeros(3)
        return f / n, rp.chain(theta, g) / n

    history = []

    def record(intermediate_result):
        history.append(intermediate_result.fun)

    theta0 = rp.to_theta(init.K / var, init.alpha, init.beta)
    f0 = objective(theta0)[0]
    lbfgs = {"ftol": options.tolerance, "gtol": 1e-9, "maxcor": 20}
    res = minimize(objective, theta0, jac=True, method="L-BFGS-B", callback=record,
                   options={**lbfgs, "maxiter": int(options.max_iterations)})
    nit = res.nit
    theta = res.x if res.fun <= f0 else theta0
    K_z, alpha, beta = rp.to_params(theta)
    est = GarchParams(K_z * var, alpha, beta)

    converged = bool(res.success) and nit < options.max_iterations
    if not converged and res.status == 2 and nit < options.max_iterations:
        # line search stalled: accept when the objective had already settled
        prev = [f0] + history
        if len(prev) >= 2:
            last = abs(prev[-1] - prev[-2]) / max(abs(prev[-1]), abs(prev[-2]), 1.0)
            converged = last < options.tolerance
    ll = -neg_log_likelihood(est, x, var)
    if converged and not math.isfinite(ll):
        converged = False
    return FitResult(
        params=est,
        log_likelihood=ll,
        converged=converged,
        iterations=int(nit),
        init_used=init,
    )
