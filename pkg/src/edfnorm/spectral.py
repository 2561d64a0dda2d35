"""Nyström approximation of the covariance operators and their top eigenvalues.

The three operators act on ``L²(φ)``::

    W q(x) = ∫ K_eta(x, y) q(y) φ(y) dy
    A q(x) = ∫ K_eta(x, y) / sqrt(Φ(x)(1-Φ(x))Φ(y)(1-Φ(y))) q(y) φ(y) dy
    U q(x) = ∫ K_xi(x, y) q(y) φ(y) dy

Substituting ``u = Φ(x)`` turns each into an unweighted operator on (0, 1)
whose kernel is bounded, after which a Gauss-Legendre Nyström matrix
``M_ij = sqrt(w_i w_j) K(u_i, u_j)`` is symmetric and shares the spectrum
of the discretized operator.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field

import numpy as np

from .kernels import KernelKind, k0, k_eta, k_xi
from .numerics import QuadratureRule, gauss_legendre, norm_quantile

__all__ = [
    "Operator",
    "DiscretizationConfig",
    "SpectralResult",
    "EigenConvergenceError",
    "SpectralConvergenceError",
    "build_operator_matrix",
    "largest_eigenvalues",
    "leading_eigenvalue",
]

#: Largest accepted relative change of the top eigenvalue under node doubling.
REFINEMENT_TOL = 1e-4


class Operator(str, enum.Enum):
    W = "W"
    A = "A"
    U = "U"


_OPERATOR_KERNEL = {Operator.W: KernelKind.K_ETA, Operator.A: KernelKind.K_ETA, Operator.U: KernelKind.K_XI}
_KERNEL_FUNCS = {KernelKind.K0: k0, KernelKind.K_ETA: k_eta, KernelKind.K_XI: k_xi}


class EigenConvergenceError(RuntimeError):
    """Power iteration hit ``max_iter`` before the Rayleigh quotient settled."""

    def __init__(self, message, rayleigh_quotient, residual):
        super().__init__(message)
        self.rayleigh_quotient = rayleigh_quotient
        self.residual = residual


class SpectralConvergenceError(RuntimeError):
    """The top eigenvalue moved too much when the node count was doubled."""


@dataclass(frozen=True)
class DiscretizationConfig:
    """Free choices of the Nyström discretization.

    The only supported transform is ``"probit"`` (``u = Φ(x)``). The rule
    defaults to an ``nodes``-point Gauss-Legendre rule on (0, 1).
    """

    nodes: int = 1024
    eig_tol: float = 1e-12
    max_iter: int = 100_000
    transform: str = "probit"
    rule: QuadratureRule | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.transform != "probit":
            raise ValueError(f"unsupported transform {self.transform!r}")
        if self.nodes < 16:
            raise ValueError("at least 16 nodes are required")
        if not self.eig_tol > 0:
            raise ValueError("eig_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if self.rule is None:
            object.__setattr__(self, "rule", _unit_rule(self.nodes))
        elif self.rule.interval != (0.0, 1.0) or len(self.rule) != self.nodes:
            raise ValueError("rule must have `nodes` points on (0, 1)")

    def refined(self) -> "DiscretizationConfig":
        return DiscretizationConfig(2 * self.nodes, self.eig_tol, self.max_iter, self.transform)


@functools.lru_cache(maxsize=16)
def _unit_rule(m: int) -> QuadratureRule:
    return gauss_legendre(m, 0.0, 1.0)


@dataclass(frozen=True)
class SpectralResult:
    """Leading eigenvalues of one operator, from the finer of two grids."""

    operator: Operator
    leading_eigenvalues: tuple[float, ...]
    config: DiscretizationConfig
    refinement_delta: float
    kernel: KernelKind = KernelKind.K_ETA

    @property
    def largest(self) -> float:
        return self.leading_eigenvalues[0]


def build_operator_matrix(
    operator: Operator | str,
    config: DiscretizationConfig | None = None,
    kernel: KernelKind | str | None = None,
) -> np.ndarray:
    """Symmetric Nyström matrix of ``operator`` on the probit scale.

    Parameters
    ----------
    operator : {"W", "A", "U"}
        ``A`` divides the kernel by ``sqrt(u(1-u)v(1-v))``.
    config : DiscretizationConfig, optional
    kernel : {"K0", "K_eta", "K_xi"}, optional
        Override of the operator's own kernel; ``"K0"`` gives the
        simple-hypothesis operators whose spectra are known exactly.

    Raises
    ------
    FloatingPointError
        If an entry is not finite; the message names the operator and node.
    """
    operator = Operator(operator)
    config = DiscretizationConfig() if config is None else config
    kind = _OPERATOR_KERNEL[operator] if kernel is None else KernelKind(kernel)
    u, w = config.rule.nodes, config.rule.weights
    x = norm_quantile(u)
    with np.errstate(all="ignore"):
        if kind is KernelKind.K0:
            # exact Brownian bridge; avoids Φ(Φ⁻¹(u)) round-off
            mat = np.minimum.outer(u, u) - np.outer(u, u)
        else:
            mat = _KERNEL_FUNCS[kind](x[:, None], x[None, :])
        scale = np.sqrt(w)
        if operator is Operator.A:
            scale = scale / np.sqrt(u * (1.0 - u))
        mat = scale[:, None] * mat * scale[None, :]
    bad = ~np.isfinite(mat)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise FloatingPointError(
            f"operator {operator.value}: non-finite matrix entry at nodes "
            f"u={u[i]!r}, v={u[j]!r}"
        )
    # exact symmetry; the kernels are symmetric only up to rounding
    return 0.5 * (mat + mat.T)


def largest_eigenvalues(
    matrix: np.ndarray, k: int = 1, tol: float = 1e-12, max_iter: int = 100_000
) -> list[float]:
    """Top-``k`` eigenvalues of a symmetric matrix by power iteration.

    Each eigenpair is removed by Hotelling deflation before the next is
    sought. Iteration stops once successive Rayleigh quotients agree to
    ``tol`` relative to the current one.

    Raises
    ------
    EigenConvergenceError
        If ``max_iter`` iterations do not reach ``tol``.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")
    if k < 1 or k > n:
        raise ValueError("k must be between 1 and the matrix size")
    if np.max(np.abs(a - a.T)) > 1e-12 * max(1.0, np.max(np.abs(a))):
        raise ValueError("matrix must be symmetric")

    rng = np.random.default_rng(0)
    values = []
    for _ in range(k):
        v = rng.standard_normal(n)
        v /= np.linalg.norm(v)
        av = a @ v
        rq = v @ av
        residual = np.linalg.norm(av - rq * v)
        for _it in range(max_iter):
            norm = np.linalg.norm(av)
            if norm == 0.0:
                rq, residual = 0.0, 0.0
                break
            v_new = av / norm
            av_new = a @ v_new
            rq_new = v_new @ av_new
            residual = np.linalg.norm(av_new - rq_new * v_new)
            converged = abs(rq_new - rq) <= tol * abs(rq_new)
            v, av, rq = v_new, av_new, rq_new
            if converged:
                break
        else:
            raise EigenConvergenceError(
                f"power iteration did not converge in {max_iter} iterations "
                f"(rayleigh quotient {rq!r}, residual {residual!r})",
                rq,
                residual,
            )
        values.append(float(rq))
        a -= rq * np.outer(v, v)
    return sorted(values, reverse=True)


@functools.lru_cache(maxsize=32)
def _leading(operator: Operator, config: DiscretizationConfig, kernel: KernelKind, k: int):
    coarse = build_operator_matrix(operator, config, kernel)
    lam_coarse = largest_eigenvalues(coarse, 1, config.eig_tol, config.max_iter)[0]
    fine_cfg = config.refined()
    fine = build_operator_matrix(operator, fine_cfg, kernel)
    lams = largest_eigenvalues(fine, k, config.eig_tol, config.max_iter)
    delta = abs(lams[0] - lam_coarse) / abs(lams[0])
    return SpectralResult(operator, tuple(lams), fine_cfg, delta, kernel)


def leading_eigenvalue(
    operator: Operator | str,
    config: DiscretizationConfig | None = None,
    kernel: KernelKind | str | None = None,
    k: int = 3,
) -> SpectralResult:
    """Top eigenvalues of ``operator`` at ``m`` and ``2m`` nodes.

    The finer grid supplies the reported values; the relative change of the
    largest one between the grids is recorded as ``refinement_delta``.

    Raises
    ------
    SpectralConvergenceError
        If ``refinement_delta >= 1e-4``.
    """
    operator = Operator(operator)
    config = DiscretizationConfig() if config is None else config
    kind = _OPERATOR_KERNEL[operator] if kernel is None else KernelKind(kernel)
    result = _leading(operator, config, kind, k)
    if not result.refinement_delta < REFINEMENT_TOL:
        raise SpectralConvergenceError(
            f"operator {operator.value}: top eigenvalue changed by "
            f"{result.refinement_delta:.2e} (relative) between {config.nodes} and "
            f"{2 * config.nodes} nodes; increase the node count"
        )
    return result
