"""Local approximate Bahadur slopes of the EDF tests and their efficiencies.

For an alternative family with drift ``s = g_star(family)`` and
``m̄ = ∫ s φ``, each test's approximate slope behaves as ``k_T θ²`` with::

    k_D  = sup|s|²            / sup_x K_eta(x, x)
    k_W2 = ∫ s² φ             / λ₁
    k_A2 = ∫ s² φ / (Φ(1-Φ))  / ν₁
    k_G  = sup|s - m̄|²        / sup_x K_xi(x, x)
    k_U2 = ∫ (s - m̄)² φ       / ζ₁

and the efficiency with respect to the likelihood-ratio test is
``k_T / k_LRT``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .alternatives import (
    TABLE_FAMILIES,
    AlternativeFamily,
    g_star,
    local_derivatives,
    lrt_slope_coefficient,
    parse_family,
)
from .edf_tests import TEST_ORDER, Test
from .kernels import KernelKind, diagonal_sup
from .numerics import WINDOW, integrate_gauss, maximize_abs, norm_cdf, norm_pdf, norm_sf
from .spectral import DiscretizationConfig, leading_eigenvalue

__all__ = [
    "NullConstants",
    "MissingSpectralInputError",
    "SlopeReport",
    "null_constants",
    "drift_functionals",
    "slope_coefficient",
    "slope_report",
    "efficiency_table",
    "b_limit",
    "REFERENCE_EFFICIENCIES",
]

#: Reference local efficiencies (D, W2, A2, G, U2) per table row.
REFERENCE_EFFICIENCIES = {
    "lehmann": (0.311, 0.584, 0.689, 0.258, 0.471),
    "lp1": (0.455, 0.800, 0.891, 0.321, 0.699),
    "lp2": (0.565, 0.917, 0.971, 0.332, 0.846),
    "contam:1:1": (0.200, 0.377, 0.464, 0.111, 0.302),
    "contam:0.5:1": (0.266, 0.505, 0.606, 0.146, 0.402),
    "contam:0:0.5": (0.258, 0.570, 0.649, 0.137, 0.668),
}

_SUP_GRID = 4001


class MissingSpectralInputError(LookupError):
    """A slope was requested without the null constant it depends on."""


@dataclass(frozen=True)
class NullConstants:
    """Tail constants of the null limiting distributions.

    ``sup_k_eta_diag`` and ``sup_k_xi_diag`` are the diagonal suprema used
    by D and G; ``lambda1``, ``nu1`` and ``zeta1`` are the top eigenvalues of
    the W, A and U operators. Any of them may be ``None`` if not needed.
    """

    sup_k_eta_diag: float | None = None
    sup_k_xi_diag: float | None = None
    lambda1: float | None = None
    nu1: float | None = None
    zeta1: float | None = None
    refinement_deltas: dict = field(default_factory=dict, compare=False)

    _NEEDS = {
        Test.D: "sup_k_eta_diag",
        Test.W2: "lambda1",
        Test.A2: "nu1",
        Test.G: "sup_k_xi_diag",
        Test.U2: "zeta1",
    }

    def for_test(self, test: Test) -> float:
        name = self._NEEDS[Test(test)]
        value = getattr(self, name)
        if value is None:
            raise MissingSpectralInputError(f"test {Test(test).value} needs {name}, which is not set")
        return value


@functools.lru_cache(maxsize=8)
def null_constants(config: DiscretizationConfig | None = None) -> NullConstants:
    """Compute all five null constants (cached per configuration)."""
    config = DiscretizationConfig() if config is None else config
    spectra = {op: leading_eigenvalue(op, config, k=1) for op in ("W", "A", "U")}
    return NullConstants(
        sup_k_eta_diag=diagonal_sup(KernelKind.K_ETA)[1],
        sup_k_xi_diag=diagonal_sup(KernelKind.K_XI)[1],
        lambda1=spectra["W"].largest,
        nu1=spectra["A"].largest,
        zeta1=spectra["U"].largest,
        refinement_deltas={op: r.refinement_delta for op, r in spectra.items()},
    )


def _family(family) -> AlternativeFamily:
    return parse_family(family) if isinstance(family, str) else family


def drift_functionals(family: AlternativeFamily | str) -> dict:
    """The θ-coefficients of the limits in probability, one per test.

    Sup-type entries (D, G) multiply θ; integral-type entries (W2, A2, U2)
    multiply θ².
    """
    family = _family(family)
    s = g_star(family, local_derivatives(family))
    mbar = integrate_gauss(lambda x: s(x) * norm_pdf(x))

    def centered(x):
        return s(x) - mbar

    return {
        Test.D: maximize_abs(s, *WINDOW, grid=_SUP_GRID)[1],
        Test.W2: integrate_gauss(lambda x: s(x) ** 2 * norm_pdf(x)),
        Test.A2: integrate_gauss(lambda x: s(x) ** 2 * norm_pdf(x) / (norm_cdf(x) * norm_sf(x))),
        Test.G: maximize_abs(centered, *WINDOW, grid=_SUP_GRID)[1],
        Test.U2: integrate_gauss(lambda x: centered(x) ** 2 * norm_pdf(x)),
    }


def _coefficient(test: Test, functional: float, constants: NullConstants) -> float:
    # c*_T = a_T b_T²: sup-type b is linear in θ, integral-type b enters via √(n·T_n)
    b_sq = functional**2 if test.root_n_scaled else functional
    return b_sq / constants.for_test(test)


def slope_coefficient(
    test: Test | str, family: AlternativeFamily | str, constants: NullConstants | None = None
) -> float:
    """``k_T`` such that the approximate slope is ``k_T θ² + o(θ²)``.

    Raises
    ------
    MissingSpectralInputError
        If ``constants`` lacks the value this test needs.
    """
    test = Test(test)
    constants = null_constants() if constants is None else constants
    return _coefficient(test, drift_functionals(family)[test], constants)


@dataclass
class SlopeReport:
    """Slope coefficients and LRT-relative efficiencies for one family."""

    family: str
    label: str
    per_test: dict
    k_lrt: float
    per_test_efficiency: dict

    def efficiencies(self, tests=TEST_ORDER, digits: int | None = None) -> list[float]:
        vals = [self.per_test_efficiency[Test(t)] for t in tests]
        return [round(v, digits) for v in vals] if digits is not None else vals

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "label": self.label,
            "k_lrt": self.k_lrt,
            "k": {t.value: v for t, v in self.per_test.items()},
            "efficiency": {t.value: v for t, v in self.per_test_efficiency.items()},
        }


def slope_report(
    family: AlternativeFamily | str, tests=TEST_ORDER, constants: NullConstants | None = None
) -> SlopeReport:
    key = family if isinstance(family, str) else family.name
    family = _family(family)
    constants = null_constants() if constants is None else constants
    funcs = drift_functionals(family)
    k = {Test(t): _coefficient(Test(t), funcs[Test(t)], constants) for t in tests}
    k_lrt = lrt_slope_coefficient(family)
    return SlopeReport(key, family.label or family.name, k, k_lrt, {t: v / k_lrt for t, v in k.items()})


def efficiency_table(
    families=TABLE_FAMILIES, tests=TEST_ORDER, constants: NullConstants | None = None
) -> list[SlopeReport]:
    """One :class:`SlopeReport` per family, sharing one set of null constants."""
    constants = null_constants() if constants is None else constants
    return [slope_report(f, tests, constants) for f in families]


def b_limit(test: Test | str, family: AlternativeFamily | str, theta: float) -> float:
    """First-order limit in probability of the unscaled statistic at ``theta``.

    Linear in θ for D and G, quadratic for W2, A2 and U2. Intended for
    small θ (roughly |θ| ≤ 0.3).
    """
    test = Test(test)
    coef = drift_functionals(family)[test]
    return coef * abs(theta) if test.root_n_scaled else coef * theta**2


def table_matrix(reports: list[SlopeReport], digits: int = 3) -> np.ndarray:
    return np.array([r.efficiencies(digits=digits) for r in reports])
