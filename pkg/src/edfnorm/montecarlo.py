"""Simulation checks of the limiting covariances, null laws and alternative limits."""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .alternatives import AlternativeFamily, parse_family, sample
from .edf_tests import Test, edf_statistics, null_replicates
from .kernels import k_eta, k_xi
from .numerics import WINDOW, integrate_gauss, maximize_abs, norm_cdf, norm_pdf, norm_sf
from .slopes import b_limit

__all__ = [
    "Process",
    "CovarianceEstimate",
    "BLimitCheck",
    "simulate_process_cov",
    "validate_b_limit",
    "null_distribution",
    "population_limit",
    "DEFAULT_GRID",
]

DEFAULT_GRID = (-2.0, -1.0, 0.0, 1.0, 2.0)
_CHUNK = 500


class Process(str, enum.Enum):
    ETA = "eta"
    XI = "xi"

    def kernel(self, x, y):
        return (k_eta if self is Process.ETA else k_xi)(x, y)


@dataclass
class CovarianceEstimate:
    """Empirical covariance of a scaled empirical process on a grid.

    ``se_matrix`` holds delete-one jackknife standard errors of each entry.
    """

    grid: np.ndarray
    process: Process
    empirical_cov: np.ndarray
    se_matrix: np.ndarray
    replicates: int
    n: int
    seed: int

    def theoretical(self) -> np.ndarray:
        return self.process.kernel(self.grid[:, None], self.grid[None, :])

    def z_scores(self) -> np.ndarray:
        return (self.empirical_cov - self.theoretical()) / self.se_matrix


def _process_chunk(process: Process, n: int, size: int, grid: np.ndarray, seed_seq) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    x = rng.standard_normal((size, n))
    mu = x.mean(axis=1, keepdims=True)
    sd = np.sqrt(((x - mu) ** 2).mean(axis=1, keepdims=True))
    w = (x - mu) / sd
    # F_n(μ̂ + σ̂ t) = #{w_i <= t} / n
    counts = (w[:, :, None] <= grid).sum(axis=1)
    eta = counts / n - norm_cdf(grid)
    if process is Process.XI:
        # ∫(F_n(μ̂+σ̂z) - Φ(z)) φ(z) dz = 1/2 - mean Φ(w_i)
        eta = eta - (0.5 - norm_cdf(w).mean(axis=1, keepdims=True))
    return np.sqrt(n) * eta


def _jackknife_cov(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    r = values.shape[0]
    d = values - values.mean(axis=0)
    s = d.T @ d
    cov = s / (r - 1)
    # leave-one-out scatter: S - r/(r-1) d_i d_iᵀ, divided by r - 2
    outer = d[:, :, None] * d[:, None, :]
    loo = (s[None] - r / (r - 1) * outer) / (r - 2)
    se = np.sqrt((r - 1) / r * ((loo - loo.mean(axis=0)) ** 2).sum(axis=0))
    return cov, se


def simulate_process_cov(
    process: Process | str,
    n: int = 2000,
    replicates: int = 10_000,
    grid=DEFAULT_GRID,
    seed: int = 0,
    workers: int = 1,
) -> CovarianceEstimate:
    """Covariance of ``√n η_n`` or ``√n ξ_n`` under N(0, 1) on ``grid``.

    Parameters
    ----------
    process : {"eta", "xi"}
    n : int
        Sample size, at least 500.
    replicates : int
        At least 2000.
    grid : sequence of float
        Evaluation points in [-3, 3].
    seed : int
        Replicates come in chunks of 500 seeded by the children of
        ``SeedSequence(seed)``, so the result is independent of ``workers``.
    workers : int
        Threads used to simulate chunks.
    """
    process = Process(process)
    grid = np.asarray(grid, dtype=float)
    if n < 500:
        raise ValueError("simulate_process_cov needs n >= 500")
    if replicates < 2000:
        raise ValueError("simulate_process_cov needs replicates >= 2000")
    if grid.ndim != 1 or grid.size == 0 or np.any(np.abs(grid) > 3):
        raise ValueError("grid must be a non-empty list of points in [-3, 3]")
    sizes = [min(_CHUNK, replicates - lo) for lo in range(0, replicates, _CHUNK)]
    seqs = np.random.SeedSequence(seed).spawn(len(sizes))
    args = [(process, n, size, grid, sq) for size, sq in zip(sizes, seqs)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda a: _process_chunk(*a), args))
    else:
        parts = [_process_chunk(*a) for a in args]
    values = np.concatenate(parts)
    cov, se = _jackknife_cov(values)
    return CovarianceEstimate(grid, process, cov, se, replicates, n, seed)


@dataclass(frozen=True)
class BLimitCheck:
    observed: float
    predicted: float
    rel_err: float


def population_limit(test: Test | str, family: AlternativeFamily | str, theta: float) -> float:
    """Exact limit in probability of the unscaled statistic at finite ``theta``.

    Uses ``B(x) = G(μ(θ) + σ(θ)x; θ) - Φ(x)`` with the mean and standard
    deviation of ``g(·; θ)`` obtained by quadrature; no linearization in θ.
    """
    test = Test(test)
    family = parse_family(family) if isinstance(family, str) else family
    family.check_theta(theta)
    mu = integrate_gauss(lambda x: x * family.density(x, theta))
    sd = np.sqrt(integrate_gauss(lambda x: (x - mu) ** 2 * family.density(x, theta)))

    def drift(x):
        return family.cdf(mu + sd * np.asarray(x, dtype=float), theta) - norm_cdf(x)

    if test in (Test.D, Test.W2, Test.A2):
        b = drift
    else:
        mean = integrate_gauss(lambda x: drift(x) * norm_pdf(x))

        def b(x):
            return drift(x) - mean

    if test.root_n_scaled:
        return maximize_abs(b, *WINDOW)[1]
    if test is Test.A2:
        return integrate_gauss(lambda x: b(x) ** 2 * norm_pdf(x) / (norm_cdf(x) * norm_sf(x)))
    return integrate_gauss(lambda x: b(x) ** 2 * norm_pdf(x))


def validate_b_limit(
    test: Test | str,
    family: AlternativeFamily | str,
    theta: float,
    n: int = 1_000_000,
    seed: int = 0,
) -> BLimitCheck:
    """Compare the unscaled statistic of one large sample with :func:`b_limit`.

    ``rel_err`` is ``|observed - predicted| / predicted`` (``inf`` when the
    prediction is 0).
    """
    test = Test(test)
    family = parse_family(family) if isinstance(family, str) else family
    if n < 100_000:
        raise ValueError("validate_b_limit needs n >= 1e5")
    x = sample(family, theta, n, seed)
    observed = float(edf_statistics(x, [test])[test])
    predicted = b_limit(test, family, theta)
    rel = abs(observed - predicted) / predicted if predicted != 0 else float("inf")
    return BLimitCheck(observed, predicted, rel)


def null_distribution(test: Test | str, n: int = 2000, replicates: int = 10_000, seed: int = 0) -> np.ndarray:
    """Sorted scaled null replicates (``√n·D``, ``n·ω²``, ...)."""
    if replicates < 10_000:
        raise ValueError("null_distribution needs replicates >= 10000")
    return np.sort(null_replicates(test, n, replicates, seed))
