"""Monte Carlo experiments on GARCH(1,1) noise with and without trends.

Seed policy
-----------
Replicate ``k`` of a cell draws everything from the integer seed
``replicate_seed(base_seed, key, k)``, where ``key`` names the cell's random
design: ``("length", N)`` for trend-free runs, ``("trend", s, r)`` for runs
with a trend. The key is hashed with BLAKE2b into four 32-bit words and fed,
together with ``base_seed`` and ``k``, to :class:`numpy.random.SeedSequence`.
Cells are therefore reproducible one at a time and in any order. Keys do not
include the GARCH parameters, so sweeps over (alpha0, beta0) reuse the same
random numbers in every cell.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .detrend import detrend, diff_returns, trend_degree
from .errors import DomainError
from .garch import DEFAULT_BURN_IN, GarchParams, cumulate, simulate
from .mle import FitOptions, fit
from .trend import TrendSpec, amplitude_ratio, eval_trend, sample_spec, scale_to_ratio

__all__ = [
    "PARAM_NAMES",
    "ComposedSeries",
    "EnsembleStats",
    "replicate_seed",
    "compose_series",
    "ensemble_stats",
    "intrinsic_variability_experiment",
    "detrend_experiment",
    "beta_sweep_experiment",
]

PARAM_NAMES = ("K", "alpha", "beta")


@dataclass(frozen=True)
class ComposedSeries:
    """xi = trend + noise_path, with both components kept."""

    xi: np.ndarray = field(repr=False)
    trend: np.ndarray = field(repr=False)
    noise_path: np.ndarray = field(repr=False)
    returns: np.ndarray = field(repr=False)
    true_params: GarchParams
    realized_r: float
    spec: TrendSpec
    seed: int


@dataclass(frozen=True)
class EnsembleStats:
    cell: dict
    replicates_requested: int
    replicates_converged: int
    mean: dict
    std: dict
    rel_std: dict
    baseline: Optional["EnsembleStats"] = None

    @property
    def converged_fraction(self) -> float:
        return self.replicates_converged / self.replicates_requested


def _key_words(key) -> list:
    digest = hashlib.blake2b(repr(key).encode(), digest_size=16).digest()
    return [int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4)]


def replicate_seed(base_seed: int, key: tuple, k: int) -> int:
    """64-bit seed of replicate ``k`` in the cell identified by ``key``."""
    ss = np.random.SeedSequence([int(base_seed), *_key_words(key), int(k)])
    return int(ss.generate_state(1, np.uint64)[0])


def _trend_key(s, r):
    return ("trend", int(s), float(r))


def compose_series(
    params: GarchParams,
    n: int,
    s: int,
    r_target: float,
    seed: int,
    burn_in: int = DEFAULT_BURN_IN,
) -> ComposedSeries:
    """Simulate GARCH noise, integrate it, and add a trend scaled to ratio ``r_target``."""
    noise_seed, trend_seed = (
        int(v) for v in np.random.SeedSequence(int(seed)).generate_state(2, np.uint64)
    )
    path = simulate(params, n, noise_seed, burn_in)
    y = cumulate(path.returns)
    spec = sample_spec(n, s, trend_seed)
    trend = scale_to_ratio(eval_trend(spec), y, r_target)
    xi = trend.values + y
    # store y as xi - f so the decomposition is exact elementwise
    y = xi - trend.values
    for a in (xi, y):
        a.setflags(write=False)
    return ComposedSeries(
        xi=xi,
        trend=trend.values,
        noise_path=y,
        returns=path.returns,
        true_params=params,
        realized_r=amplitude_ratio(trend.values, y),
        spec=spec,
        seed=int(seed),
    )


def ensemble_stats(estimates, cell: Optional[dict] = None,
                   replicates_requested: Optional[int] = None) -> EnsembleStats:
    """Sample mean, std (n - 1) and std / mean of each parameter."""
    est = list(estimates)
    if len(est) < 2:
        raise DomainError(f"need at least 2 estimates, got {len(est)}")
    a = np.array([[p.K, p.alpha, p.beta] for p in est])
    # shifting by the first row makes identical estimates give std exactly 0
    dev = a - a[0]
    mean = a[0] + dev.mean(axis=0)
    std = dev.std(axis=0, ddof=1)
    rel = [sd / m if m != 0 else math.nan for sd, m in zip(std, mean)]
    return EnsembleStats(
        cell=dict(cell or {}),
        replicates_requested=len(est) if replicates_requested is None else replicates_requested,
        replicates_converged=len(est),
        mean=dict(zip(PARAM_NAMES, mean.tolist())),
        std=dict(zip(PARAM_NAMES, std.tolist())),
        rel_std=dict(zip(PARAM_NAMES, rel)),
    )


def _aggregate(results, cell, requested) -> EnsembleStats:
    kept = [p for p, ok in results if ok]
    if len(kept) < 2:
        nan = dict.fromkeys(PARAM_NAMES, math.nan)
        return EnsembleStats(dict(cell), requested, len(kept), nan, dict(nan), dict(nan))
    return ensemble_stats(kept, cell, requested)


def _map(func, tasks, workers):
    if workers is None or workers <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def _fit_pair(x, options):
    res = fit(x, options)
    return res.params, res.converged


def _intrinsic_task(task):
    params, n, seed, burn_in, options = task
    return _fit_pair(simulate(params, n, seed, burn_in).returns, options)


def _trend_task(task):
    params, n, s, r, seed, burn_in, options, with_baseline = task
    comp = compose_series(params, n, s, r, seed, burn_in)
    x_est = diff_returns(detrend(comp.xi, trend_degree(s)))
    out = _fit_pair(x_est, options)
    base = _fit_pair(comp.returns, options) if with_baseline else None
    return out, base


def intrinsic_variability_experiment(
    params: GarchParams,
    lengths,
    replicates: int,
    seed: int,
    options: Optional[FitOptions] = None,
    burn_in: int = DEFAULT_BURN_IN,
    workers: Optional[int] = None,
) -> list:
    """Spread of ML estimates on trend-free series, one cell per length N."""
    if replicates < 2:
        raise DomainError(f"replicates must be >= 2, got {replicates}")
    lengths = [int(N) for N in lengths]
    if not lengths or min(lengths) < 100:
        raise DomainError("lengths must be non-empty and all >= 100")
    options = options or FitOptions()
    out = []
    for N in sorted(set(lengths)):
        tasks = [(params, N, replicate_seed(seed, ("length", N), k), burn_in, options)
                 for k in range(replicates)]
        out.append(_aggregate(_map(_intrinsic_task, tasks, workers), {"N": N}, replicates))
    return out


def _trend_cell(params, n, s, r, replicates, seed, options, burn_in, baseline, workers, cell):
    tasks = [(params, n, s, r, replicate_seed(seed, _trend_key(s, r), k), burn_in, options,
              baseline) for k in range(replicates)]
    results = _map(_trend_task, tasks, workers)
    stats = _aggregate([est for est, _ in results], cell, replicates)
    if baseline:
        base = _aggregate([b for _, b in results], cell, replicates)
        stats = replace(stats, baseline=base)
    return stats


def detrend_experiment(
    params: GarchParams,
    s_values,
    r_values,
    n: int,
    replicates: int,
    seed: int,
    options: Optional[FitOptions] = None,
    burn_in: int = DEFAULT_BURN_IN,
    baseline: bool = True,
    workers: Optional[int] = None,
) -> dict:
    """Fit GARCH(1,1) after polynomial detrending, for every (s, r) cell.

    Returns ``{(s, r): EnsembleStats}`` in ascending (s, r) order. With
    ``baseline`` set, each cell also carries the stats of fits to the true
    noise of the same replicates in ``EnsembleStats.baseline``.
    """
    if replicates < 2:
        raise DomainError(f"replicates must be >= 2, got {replicates}")
    s_values = sorted({int(s) for s in s_values})
    r_values = sorted({float(r) for r in r_values})
    if not s_values or not r_values:
        raise DomainError("s_values and r_values must be non-empty")
    if min(r_values) <= 0:
        raise DomainError("r values must be > 0")
    options = options or FitOptions()
    grid = {}
    for s in s_values:
        for r in r_values:
            grid[(s, r)] = _trend_cell(params, n, s, r, replicates, seed, options, burn_in,
                                       baseline, workers, {"s": s, "r": r})
    return grid


def beta_sweep_experiment(
    beta_values,
    sum_const: float,
    K: float,
    s: int,
    r: float,
    n: int,
    replicates: int,
    seed: int,
    options: Optional[FitOptions] = None,
    burn_in: int = DEFAULT_BURN_IN,
    baseline: bool = False,
    workers: Optional[int] = None,
) -> list:
    """Detrending pipeline for beta0 in ``beta_values`` with alpha0 = sum_const - beta0."""
    if replicates < 2:
        raise DomainError(f"replicates must be >= 2, got {replicates}")
    betas = sorted({float(b) for b in beta_values})
    if not betas:
        raise DomainError("beta_values must be non-empty")
    bad = [b for b in betas if not 0 < b < sum_const]
    if bad:
        raise DomainError(f"beta0 values must lie in (0, {sum_const}): {bad}")
    options = options or FitOptions()
    out = []
    for b in betas:
        params = GarchParams(K, sum_const - b, b)
        out.append(_trend_cell(params, n, s, float(r), replicates, seed, options, burn_in,
                               baseline, workers, {"s": int(s), "r": float(r), "beta0": b}))
    return out
