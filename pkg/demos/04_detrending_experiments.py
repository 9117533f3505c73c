"""
Detrending errors and the estimated parameters
==============================================

Three studies at reduced ensemble size (30 replicates per cell; the
acceptance tests use 100):

* DJC parameters over a grid of trend parts s and ratios r. The mean of
  beta stays put and the spread matches fits on the true noise.
* alpha0 + beta0 = 0.972 with beta0 swept from 0.1 to 0.9 (s = 4, r = 2).
  Small beta0 is where detrending starts to hurt.
* beta0 = 0.1: the spread of beta grows with s and r.
"""

from garchtrend import (
    DJC_PARAMS,
    GarchParams,
    beta_sweep_experiment,
    detrend_experiment,
)
from garchtrend.csvio import write_stats_csv

REPS = 30

grid = detrend_experiment(DJC_PARAMS, [1, 2, 3, 4], [0.25, 1.0, 4.0], 6000, REPS, seed=7)
print("DJC parameters: <beta> (detrended) / rel std ratio vs true noise")
for (s, r), st in grid.items():
    ratio = st.rel_std["beta"] / st.baseline.rel_std["beta"]
    print(f"  s={s} r={r:<5} <beta>={st.mean['beta']:.4f}  ratio={ratio:.2f}")
write_stats_csv(grid, "djc_grid.csv")

sweep = beta_sweep_experiment([0.1, 0.3, 0.5, 0.7, 0.9], 0.972, DJC_PARAMS.K, 4, 2.0,
                              6000, REPS, seed=7)
print("sweep at alpha0 + beta0 = 0.972:")
for st in sweep:
    b = st.cell["beta0"]
    print(f"  beta0={b:.1f} <beta>={st.mean['beta']:.4f} rel std={st.rel_std['beta']:.3f}")
write_stats_csv(sweep, "sweep.csv")

small = detrend_experiment(GarchParams(DJC_PARAMS.K, 0.872, 0.1), [1, 4], [0.25, 1.0, 4.0],
                           6000, REPS, seed=7, baseline=False)
print("beta0 = 0.1: rel std of beta")
for (s, r), st in small.items():
    print(f"  s={s} r={r:<5} {st.rel_std['beta']:.3f}")
