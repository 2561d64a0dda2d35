"""Parametric alternatives to normality that reduce to N(0, 1) at θ = 0.

Each family carries its density and distribution function, their
θ-derivatives at θ = 0 in closed form, the range of θ for which the density
is valid, and an exact sampler. New families can be added by constructing
:class:`AlternativeFamily` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import integrate_gauss, norm_cdf, norm_pdf, norm_quantile, norm_sf

__all__ = [
    "AlternativeFamily",
    "LocalDerivatives",
    "lehmann",
    "ley_paindaveine_1",
    "ley_paindaveine_2",
    "contamination",
    "builtin_family",
    "parse_family",
    "TABLE_FAMILIES",
    "local_derivatives",
    "g_star",
    "lrt_slope_coefficient",
    "sample",
]


@dataclass(frozen=True)
class AlternativeFamily:
    """A density family ``g(x; θ)`` with ``g(x; 0)`` normal.

    Attributes
    ----------
    name : str
    density, cdf : callable ``(x, theta) -> array``
    density_theta_deriv_at_0 : callable ``x -> array``
        ``∂g/∂θ`` at θ = 0.
    cdf_theta_deriv_at_0 : callable ``x -> array``
        ``∂G/∂θ`` at θ = 0.
    theta_range : tuple
        Closed bounds ``(lo, hi)`` of valid θ; ``lo_open`` makes the lower one strict.
    sampler : callable ``(theta, n, rng) -> ndarray``
    null_mu, null_sigma2 : float
        Parameters of the normal member ``g(x; 0)``.
    """

    name: str
    density: Callable
    cdf: Callable
    density_theta_deriv_at_0: Callable
    cdf_theta_deriv_at_0: Callable
    theta_range: tuple[float, float]
    sampler: Callable
    null_mu: float = 0.0
    null_sigma2: float = 1.0
    lo_open: bool = False
    label: str = ""

    @property
    def null_sigma(self) -> float:
        return math.sqrt(self.null_sigma2)

    def null_density(self, x):
        s = self.null_sigma
        return norm_pdf((np.asarray(x, dtype=float) - self.null_mu) / s) / s

    def check_theta(self, theta: float) -> None:
        lo, hi = self.theta_range
        below = theta <= lo if self.lo_open else theta < lo
        if below or theta > hi or not math.isfinite(theta):
            lo_br = "(" if self.lo_open else "["
            raise ValueError(
                f"theta={theta!r} is outside the valid range {lo_br}{lo}, {hi}] of {self.name}"
            )


@dataclass(frozen=True)
class LocalDerivatives:
    """First θ-derivatives at 0 of the mean and variance of ``g(·; θ)``."""

    mu_prime: float
    sigma2_prime: float
    sigma_prime: float


def _rejection(ratio: Callable, envelope: float, n: int, rng: np.random.Generator) -> np.ndarray:
    # propose from φ, accept with probability ratio(x) / envelope
    out = np.empty(n)
    filled = 0
    while filled < n:
        batch = max(64, int(1.2 * envelope * (n - filled)))
        x = rng.standard_normal(batch)
        keep = x[rng.uniform(size=batch) * envelope <= ratio(x)]
        take = min(keep.size, n - filled)
        out[filled : filled + take] = keep[:take]
        filled += take
    return out


def lehmann() -> AlternativeFamily:
    """``g(x; θ) = (1 + θ) Φ(x)^θ φ(x)``, θ > -1."""

    def density(x, theta):
        x = np.asarray(x, dtype=float)
        return (1.0 + theta) * norm_cdf(x) ** theta * norm_pdf(x)

    def cdf(x, theta):
        return norm_cdf(x) ** (1.0 + theta)

    def dg(x):
        x = np.asarray(x, dtype=float)
        return norm_pdf(x) * (1.0 + np.log(norm_cdf(x)))

    def dG(x):
        f = norm_cdf(x)
        return f * np.log(f)

    def sampler(theta, n, rng):
        v = rng.uniform(size=n) ** (1.0 / (1.0 + theta))
        return norm_quantile(np.clip(v, np.finfo(float).tiny, 1.0 - 2.0**-53))

    return AlternativeFamily(
        "lehmann", density, cdf, dg, dG, (-1.0, math.inf), sampler, lo_open=True, label="Lehmann"
    )


def ley_paindaveine_1() -> AlternativeFamily:
    """``g(x; θ) = φ(x) exp(-θ(1-Φ(x))) (1 + θΦ(x))``, θ ≥ 0."""

    def density(x, theta):
        x = np.asarray(x, dtype=float)
        return norm_pdf(x) * np.exp(-theta * norm_sf(x)) * (1.0 + theta * norm_cdf(x))

    def cdf(x, theta):
        return norm_cdf(x) * np.exp(-theta * norm_sf(x))

    def dg(x):
        x = np.asarray(x, dtype=float)
        return norm_pdf(x) * (2.0 * norm_cdf(x) - 1.0)

    def dG(x):
        return -norm_cdf(x) * norm_sf(x)

    def sampler(theta, n, rng):
        def ratio(x):
            return np.exp(-theta * norm_sf(x)) * (1.0 + theta * norm_cdf(x))

        return _rejection(ratio, 1.0 + theta, n, rng)

    return AlternativeFamily(
        "ley_paindaveine_1", density, cdf, dg, dG, (0.0, math.inf), sampler,
        label="1st Ley-Paindaveine",
    )


def ley_paindaveine_2() -> AlternativeFamily:
    """``g(x; θ) = φ(x)(1 - θπ cos(πΦ(x)))``, |θ| ≤ 1/π."""

    def density(x, theta):
        x = np.asarray(x, dtype=float)
        return norm_pdf(x) * (1.0 - theta * math.pi * np.cos(math.pi * norm_cdf(x)))

    def cdf(x, theta):
        f = norm_cdf(x)
        return f - theta * np.sin(math.pi * f)

    def dg(x):
        x = np.asarray(x, dtype=float)
        return -math.pi * norm_pdf(x) * np.cos(math.pi * norm_cdf(x))

    def dG(x):
        return -np.sin(math.pi * norm_cdf(x))

    def sampler(theta, n, rng):
        def ratio(x):
            return 1.0 - theta * math.pi * np.cos(math.pi * norm_cdf(x))

        return _rejection(ratio, 1.0 + abs(theta) * math.pi, n, rng)

    return AlternativeFamily(
        "ley_paindaveine_2", density, cdf, dg, dG, (-1.0 / math.pi, 1.0 / math.pi), sampler,
        label="2nd Ley-Paindaveine",
    )


def contamination(mu: float = 1.0, sigma2: float = 1.0) -> AlternativeFamily:
    """``g(x; θ) = (1-θ)φ(x) + (θ/σ)φ((x-μ)/σ)``, 0 ≤ θ ≤ 1."""
    if not (math.isfinite(mu) and math.isfinite(sigma2) and sigma2 > 0):
        raise ValueError(f"contamination needs finite mu and sigma2 > 0, got {mu!r}, {sigma2!r}")
    s = math.sqrt(sigma2)

    def other_pdf(x):
        return norm_pdf((np.asarray(x, dtype=float) - mu) / s) / s

    def other_cdf(x):
        return norm_cdf((np.asarray(x, dtype=float) - mu) / s)

    def density(x, theta):
        return (1.0 - theta) * norm_pdf(x) + theta * other_pdf(x)

    def cdf(x, theta):
        return (1.0 - theta) * norm_cdf(x) + theta * other_cdf(x)

    def dg(x):
        return other_pdf(x) - norm_pdf(x)

    def dG(x):
        return other_cdf(x) - norm_cdf(x)

    def sampler(theta, n, rng):
        z = rng.standard_normal(n)
        mixed = rng.uniform(size=n) < theta
        return np.where(mixed, mu + s * z, z)

    name = f"contamination:{mu:g}:{sigma2:g}"
    return AlternativeFamily(
        name, density, cdf, dg, dG, (0.0, 1.0), sampler,
        label=f"Contamination with N({mu:g},{sigma2:g})",
    )


_BUILTINS = {
    "lehmann": lehmann,
    "ley_paindaveine_1": ley_paindaveine_1,
    "lp1": ley_paindaveine_1,
    "ley_paindaveine_2": ley_paindaveine_2,
    "lp2": ley_paindaveine_2,
}


def builtin_family(name: str, mu: float = 1.0, sigma2: float = 1.0) -> AlternativeFamily:
    """Look up a built-in family; ``mu`` and ``sigma2`` apply to contamination."""
    key = name.lower()
    if key in ("contamination", "contam"):
        return contamination(mu, sigma2)
    try:
        return _BUILTINS[key]()
    except KeyError:
        raise ValueError(f"unknown alternative family {name!r}") from None


def parse_family(spec: str) -> AlternativeFamily:
    """Parse ``lehmann``, ``lp1``, ``lp2`` or ``contam:MU:SIGMA2``."""
    head, *params = spec.split(":")
    if head.lower() in ("contam", "contamination"):
        if len(params) != 2:
            raise ValueError(f"expected contam:MU:SIGMA2, got {spec!r}")
        try:
            mu, sigma2 = float(params[0]), float(params[1])
        except ValueError:
            raise ValueError(f"non-numeric contamination parameters in {spec!r}") from None
        return contamination(mu, sigma2)
    if params:
        raise ValueError(f"family {head!r} takes no parameters")
    return builtin_family(head)


#: The six rows of the efficiency table, in order.
TABLE_FAMILIES = ("lehmann", "lp1", "lp2", "contam:1:1", "contam:0.5:1", "contam:0:0.5")


def local_derivatives(family: AlternativeFamily) -> LocalDerivatives:
    """``μ'(0) = ∫ x g'(x)dx`` and ``(σ²)'(0) = ∫ (x-μ₀)² g'(x)dx``."""
    dg = family.density_theta_deriv_at_0
    mu_p = integrate_gauss(lambda x: x * dg(x))
    s2_p = integrate_gauss(lambda x: (x - family.null_mu) ** 2 * dg(x))
    return LocalDerivatives(mu_p, s2_p, s2_p / (2.0 * family.null_sigma))


def g_star(family: AlternativeFamily, derivs: LocalDerivatives | None = None) -> Callable:
    """First-order drift ``x -> G'(x;0) + g(x;0)(μ'(0) + x σ'(0))``.

    This is the θ-coefficient of the limit in probability of the
    estimated-parameter empirical process under the alternative.
    """
    d = local_derivatives(family) if derivs is None else derivs
    dG = family.cdf_theta_deriv_at_0
    g0 = family.null_density

    def drift(x):
        x = np.asarray(x, dtype=float)
        return dG(x) + g0(x) * (d.mu_prime + x * d.sigma_prime)

    return drift


def lrt_slope_coefficient(family: AlternativeFamily) -> float:
    """Coefficient of θ² in twice the Kullback-Leibler distance to the normal family.

    ``∫ g'²/g₀ - (∫ x g')²/σ₀² - (∫ (x-μ₀)² g')²/(2σ₀⁴)``, all derivatives at θ = 0.

    Raises
    ------
    FloatingPointError
        If the Fisher-type integrand is not finite on the quadrature window.
    """
    dg = family.density_theta_deriv_at_0
    d = local_derivatives(family)
    fisher = integrate_gauss(lambda x: dg(x) ** 2 / family.null_density(x))
    s2 = family.null_sigma2
    return fisher - d.mu_prime**2 / s2 - d.sigma2_prime**2 / (2.0 * s2 * s2)


def sample(family: AlternativeFamily, theta: float, n: int, seed=None) -> np.ndarray:
    """``n`` exact draws from ``g(·; θ)``; deterministic for a fixed seed."""
    family.check_theta(theta)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return np.asarray(family.sampler(theta, int(n), rng), dtype=float)

