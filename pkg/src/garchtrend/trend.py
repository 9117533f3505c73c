"""Deterministic trends built from joined half-periods of a sine.

A trend of length n with s monotonic parts has breakpoints
0 = N_1 < N_2 < ... < N_{s+1} = n; part p holds the 1-based points
N_p < i <= N_{p+1}. Within part p

    f_i = f_start + sign_p * a_p * [1 - sin(pi/2 * (1 + 2u))]

where u runs from 0 at the part's anchor point to 1 at N_{p+1}, and
sign_p = first_sign * (-1)**(p - 1). The anchor of part 1 is the point
i = 1 itself (f_1 = 0); later parts start from the last point of the
previous part. The bracket grows monotonically from 0 to 2, so each part
moves the trend by exactly sign_p * 2 * a_p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "MIN_PART_LEN",
    "R_MIN",
    "R_MAX",
    "TrendSpec",
    "TrendSeries",
    "sample_spec",
    "eval_trend",
    "amplitude_ratio",
    "scale_to_ratio",
    "sample_ratio",
]

MIN_PART_LEN = 50
R_MIN, R_MAX = 0.25, 4.0


@dataclass(frozen=True)
class TrendSpec:
    n: int
    s: int
    breakpoints: tuple
    amplitudes: tuple
    first_sign: int = -1

    def __post_init__(self):
        bp = tuple(int(b) for b in self.breakpoints)
        amps = tuple(float(a) for a in self.amplitudes)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "amplitudes", amps)
        if self.s < 1:
            raise DomainError(f"s must be >= 1, got {self.s}")
        if self.n < MIN_PART_LEN * self.s:
            raise DomainError(f"n={self.n} too short for s={self.s} parts of >= {MIN_PART_LEN}")
        if len(bp) != self.s + 1 or bp[0] != 0 or bp[-1] != self.n:
            raise DomainError(f"breakpoints must run 0 .. n with s+1 entries, got {bp}")
        if min(self.part_lengths) < MIN_PART_LEN:
            raise DomainError(f"every part needs >= {MIN_PART_LEN} points, got {self.part_lengths}")
        if len(amps) != self.s or not all(0.0 < a < 1.0 for a in amps):
            raise DomainError(f"need s amplitudes in (0, 1), got {amps}")
        if self.first_sign not in (1, -1):
            raise DomainError(f"first_sign must be +1 or -1, got {self.first_sign}")

    @property
    def part_lengths(self) -> tuple:
        return tuple(b - a for a, b in zip(self.breakpoints, self.breakpoints[1:]))

    @property
    def signs(self) -> tuple:
        return tuple(self.first_sign * (-1) ** p for p in range(self.s))


@dataclass(frozen=True)
class TrendSeries:
    values: np.ndarray = field(repr=False)
    spec: TrendSpec
    scale: float = 1.0

    def __len__(self):
        return len(self.values)


def sample_spec(n: int, s: int, seed, first_sign: int = -1) -> TrendSpec:
    """Draw breakpoints and amplitudes for a trend with ``s`` parts.

    Part lengths are uniform over all integer compositions of ``n`` with
    every part >= 50: the slack n - 50 s is split by drawing s - 1 distinct
    cut positions among n - 50 s + s - 1 slots (stars and bars).
    Amplitudes are i.i.d. uniform on (0, 1).
    """
    n, s = int(n), int(s)
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    if n < MIN_PART_LEN * s:
        raise DomainError(f"n={n} is shorter than {MIN_PART_LEN} * s = {MIN_PART_LEN * s}")
    rng = np.random.default_rng(seed)
    slack = n - MIN_PART_LEN * s
    cuts = np.sort(rng.choice(slack + s - 1, size=s - 1, replace=False))
    edges = np.concatenate(([-1], cuts, [slack + s - 1]))
    lengths = np.diff(edges) - 1 + MIN_PART_LEN
    breakpoints = np.concatenate(([0], np.cumsum(lengths)))
    amps = rng.uniform(0.0, 1.0, size=s)
    # uniform() is [0, 1); a_p = 0 would make a flat part
    while np.any(amps == 0.0):
        amps[amps == 0.0] = rng.uniform(0.0, 1.0, size=int(np.sum(amps == 0.0)))
    return TrendSpec(n=n, s=s, breakpoints=tuple(breakpoints), amplitudes=tuple(amps),
                     first_sign=first_sign)


def eval_trend(spec: TrendSpec) -> TrendSeries:
    """Evaluate the half-sine recurrence for ``spec``; f_1 = 0."""
    f = np.zeros(spec.n)
    start_val = 0.0
    bp = spec.breakpoints
    for p in range(spec.s):
        # 0-based index of the anchor point and of the part's last point
        anchor = 0 if p == 0 else bp[p] - 1
        end = bp[p + 1] - 1
        idx = np.arange(anchor + 1, end + 1)
        u = (idx - anchor) / (end - anchor)
        bracket = 1.0 - np.sin(0.5 * math.pi * (1.0 + 2.0 * u))
        f[idx] = start_val + spec.signs[p] * spec.amplitudes[p] * bracket
        start_val = f[end]
    f.setflags(write=False)
    return TrendSeries(values=f, spec=spec)


def _range(v, what) -> float:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise DomainError(f"{what} must be a non-empty 1-d sequence")
    return float(v.max() - v.min())


def amplitude_ratio(trend, noise_path) -> float:
    """r = range(trend) / range(noise_path)."""
    if isinstance(trend, TrendSeries):
        trend = trend.values
    if len(trend) != len(noise_path):
        raise DomainError(f"length mismatch: {len(trend)} vs {len(noise_path)}")
    noise_range = _range(noise_path, "noise path")
    if not noise_range > 0:
        raise DomainError("noise path is constant; ratio undefined")
    return _range(trend, "trend") / noise_range


def scale_to_ratio(trend: TrendSeries, noise_path, r_target: float) -> TrendSeries:
    """Rescale ``trend`` so that its range is ``r_target`` times the noise range."""
    if not (math.isfinite(r_target) and r_target > 0):
        raise DomainError(f"r_target must be > 0, got {r_target}")
    current = amplitude_ratio(trend.values, noise_path)
    if not current > 0:
        raise DomainError("trend is constant; cannot rescale to a ratio")
    factor = r_target / current
    values = trend.values * factor
    # one extra multiplicative correction absorbs rounding in the range
    values = values * (r_target / amplitude_ratio(values, noise_path))
    values.setflags(write=False)
    return TrendSeries(values=values, spec=trend.spec, scale=trend.scale * factor)


def sample_ratio(seed) -> float:
    """Uniform draw of r on [0.25, 4]."""
    return float(np.random.default_rng(seed).uniform(R_MIN, R_MAX))
