"""
Checking the asymptotics by simulation
======================================

Three simulation checks: the covariance of the fitted empirical process
against its kernel, the null mean of n·ω² against the operator trace, and
the limit of the statistics under a fixed alternative.
"""

import numpy as np

from edfnorm.kernels import k_eta
from edfnorm.montecarlo import null_distribution, population_limit, simulate_process_cov, validate_b_limit
from edfnorm.numerics import integrate_gauss, norm_pdf

# %%
# Covariance of √n η_n and √n ξ_n on the default grid, as z-scores against
# the kernels (jackknife standard errors).
for process in ("eta", "xi"):
    est = simulate_process_cov(process, n=2000, replicates=10_000, seed=3)
    print(process, "max |z| =", round(float(np.abs(est.z_scores()).max()), 2))

# %%
# The mean of the limiting law of n·ω² is the trace of its covariance operator.
trace = integrate_gauss(lambda x: k_eta(x, x) * norm_pdf(x))
draws = null_distribution("W2", n=2000, replicates=10_000, seed=4)
print(f"mean n*w2 = {draws.mean():.5f} +- {draws.std() / 100:.5f}, trace = {trace:.5f}")

# %%
# Under an alternative the unscaled statistic converges to a constant. The
# first-order prediction is linear (sup types) or quadratic (integral types)
# in θ; the exact population value is shown alongside.
for test, family, theta in [("D", "contam:1:1", 0.2), ("D", "contam:1:1", 0.02), ("W2", "lehmann", 0.2)]:
    chk = validate_b_limit(test, family, theta, n=1_000_000, seed=5)
    exact = population_limit(test, family, theta)
    print(f"{test:<3}{family:<12} theta={theta:<5} observed {chk.observed:.3e}  "
          f"first order {chk.predicted:.3e}  exact {exact:.3e}")
