"""
Synthetic trends and polynomial detrending
==========================================

Build a trend from half-periods of a sine, add it to an integrated GARCH
path at a chosen trend-to-noise ratio, then strip it with a polynomial fit
of degree 2s + 3 and refit the model on the differenced residuals.
"""

import numpy as np

from garchtrend import (
    DJC_PARAMS,
    compose_series,
    detrend,
    diff_returns,
    eval_trend,
    fit,
    sample_spec,
    trend_degree,
)

spec = sample_spec(6000, 4, seed=3)
print("breakpoints:", spec.breakpoints)
print("amplitudes :", np.round(spec.amplitudes, 3))

trend = eval_trend(spec)
# every part moves the trend by +-2 a_p and the direction alternates
f = trend.values
ends = [0] + [b - 1 for b in spec.breakpoints[1:]]
print("part moves :", np.round(np.diff(f[ends]), 3))

# noise path y_n (cumulated returns) plus the trend scaled so that
# range(trend) / range(y) = 2
comp = compose_series(DJC_PARAMS, 6000, 4, 2.0, seed=3)
print("realized r :", comp.realized_r)

degree = trend_degree(comp.spec.s)
resid = detrend(comp.xi, degree)
x_est = diff_returns(resid)
print(f"degree {degree}: residual range {np.ptp(resid):.4f} vs noise range "
      f"{np.ptp(comp.noise_path):.4f}")

true_fit = fit(comp.returns).params
est_fit = fit(x_est).params
print(f"true noise     : alpha={true_fit.alpha:.4f} beta={true_fit.beta:.4f}")
print(f"detrended noise: alpha={est_fit.alpha:.4f} beta={est_fit.beta:.4f}")
