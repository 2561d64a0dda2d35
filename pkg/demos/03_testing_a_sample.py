"""
Testing data for normality
==========================

Applies the five tests, with Monte Carlo p-values, to a normal sample and
to a sample from a contaminated normal.
"""

import numpy as np

from edfnorm.alternatives import contamination, sample
from edfnorm.edf_tests import TEST_ORDER, mc_pvalue

rng = np.random.default_rng(7)
datasets = {
    "N(10, 4), n=80": rng.normal(10, 2, 80),
    "0.7 N(0,1) + 0.3 N(3,1), n=80": sample(contamination(3.0, 1.0), 0.3, 80, seed=7),
}

# %%
# The statistics do not depend on the location or scale of the data, so
# every p-value is simulated from standard normal samples of the same size.
for name, x in datasets.items():
    print(name)
    for t in TEST_ORDER:
        out = mc_pvalue(t, x, replicates=5000, seed=1)
        print(f"  {t.value:<3} statistic {out.statistic:8.4f}   p = {out.p_value:.4f}")
