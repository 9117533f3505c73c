"""
Simulating and fitting a GARCH(1,1) process
===========================================

Simulate daily log returns with the Dow Jones Composite parameters, check
the long-run variance, and recover the parameters by maximum likelihood.
"""

import numpy as np

from garchtrend import DJC_PARAMS, fit, simulate, unconditional_variance

# The parameter triple (K, alpha, beta); alpha + beta = 0.9735 < 1, so the
# process is stationary and has a finite long-run variance
print(DJC_PARAMS, "stationary:", DJC_PARAMS.is_stationary())
print("K / (1 - alpha - beta) =", unconditional_variance(DJC_PARAMS))

# A path of 6000 returns. The variance recursion starts at the long-run
# level and the first 500 steps are thrown away.
path = simulate(DJC_PARAMS, 6000, seed=1, burn_in=500)
print("sample variance        =", np.var(path.returns))
print("largest |return|       =", np.abs(path.returns).max())

# Maximum likelihood. The fit reports convergence instead of raising.
result = fit(path.returns)
p = result.params
print(f"estimate: K={p.K:.3e} alpha={p.alpha:.4f} beta={p.beta:.4f}")
print("log-likelihood:", result.log_likelihood, "converged:", result.converged)

# The estimate scales with the data: multiplying returns by c multiplies K
# by c**2 and leaves alpha and beta alone.
scaled = fit(100 * path.returns).params
print(f"x100 data: K={scaled.K:.3e} alpha={scaled.alpha:.4f} beta={scaled.beta:.4f}")
