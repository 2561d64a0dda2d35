"""Estimated-parameter EDF normality tests and their local approximate
Bahadur efficiencies.

Submodules
----------
numerics      normal special functions, Gauss-Legendre quadrature, sup search
kernels       limiting covariance kernels K0, K_eta, K_xi
spectral      Nyström eigenvalues of the W, A, U covariance operators
alternatives  Lehmann, Ley-Paindaveine and contamination alternatives
slopes        slope coefficients, LRT slope and efficiency table
edf_tests     the five statistics, MLE fitting and Monte Carlo p-values
montecarlo    simulation checks of covariances and limits
cli           ``edfnorm`` command line
"""

__version__ = "0.1.0"

from .alternatives import (  # noqa: E402
    AlternativeFamily,
    builtin_family,
    g_star,
    local_derivatives,
    lrt_slope_coefficient,
    parse_family,
    sample,
)
from .edf_tests import Test, TestOutcome, mc_pvalue, mle, statistic  # noqa: E402
from .kernels import diagonal_sup, k0, k_eta, k_xi  # noqa: E402
from .slopes import SlopeReport, b_limit, efficiency_table, slope_coefficient  # noqa: E402
from .spectral import build_operator_matrix, largest_eigenvalues, leading_eigenvalue  # noqa: E402
