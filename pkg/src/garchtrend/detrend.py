"""Polynomial least-squares detrending."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import legendre
from scipy.linalg import qr, solve_triangular

from .errors import DomainError

__all__ = ["PolyFit", "fit_polynomial", "detrend", "diff_returns", "trend_degree"]


@dataclass(frozen=True)
class PolyFit:
    """Least-squares polynomial in the Legendre basis on [-1, 1]."""

    degree: int
    coefficients: np.ndarray
    fitted: np.ndarray = field(repr=False)

    def __call__(self, u):
        return legendre.legval(u, self.coefficients)


def trend_degree(s: int) -> int:
    """Detrending degree 2s + 3 for a trend with ``s`` monotonic parts."""
    return 2 * int(s) + 3


def _abscissa(n: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n)


def fit_polynomial(series, degree: int) -> PolyFit:
    """Fit a polynomial of ``degree`` to ``series`` sampled on a uniform grid.

    The grid is mapped to [-1, 1] and the Legendre design matrix is solved
    by Householder QR, which stays well conditioned at degree 11 and beyond.
    """
    y = np.asarray(series, dtype=float)
    degree = int(degree)
    if y.ndim != 1:
        raise DomainError("series must be 1-d")
    if degree < 0:
        raise DomainError(f"degree must be >= 0, got {degree}")
    if y.size <= degree + 1:
        raise DomainError(f"need more than degree + 1 = {degree + 1} points, got {y.size}")
    if not np.all(np.isfinite(y)):
        raise DomainError("series must be finite")
    V = legendre.legvander(_abscissa(y.size), degree)
    Q, R = qr(V, mode="economic")
    coef = solve_triangular(R, Q.T @ y)
    fitted = V @ coef
    coef.setflags(write=False)
    fitted.setflags(write=False)
    return PolyFit(degree=degree, coefficients=coef, fitted=fitted)


def detrend(series, degree: int) -> np.ndarray:
    """Residuals ``series - fitted`` of a degree-``degree`` polynomial fit."""
    y = np.asarray(series, dtype=float)
    return y - fit_polynomial(y, degree).fitted


def diff_returns(path) -> np.ndarray:
    """First differences x_n = y_{n+1} - y_n."""
    y = np.asarray(path, dtype=float)
    if y.ndim != 1 or y.size < 2:
        raise DomainError("diff_returns needs at least two points")
    return np.diff(y)
