"""Covariance kernels of the limiting empirical processes under a normal null.

``k0`` is the Brownian-bridge kernel in the x-scale (parameters known).
``k_eta`` is the covariance of the process with location and scale
estimated by maximum likelihood, and ``k_xi`` that of the same process
centered by its own ``φ``-weighted mean.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .numerics import WINDOW, maximize_abs, norm_cdf, norm_pdf, norm_sf

__all__ = [
    "KernelKind",
    "Weighting",
    "KernelSpec",
    "k0",
    "k_eta",
    "k_xi",
    "k_xi_uncorrected",
    "diagonal_sup",
    "XI_TAIL_CONSTANT",
]

_INV_2SQRTPI = 1.0 / (2.0 * math.sqrt(math.pi))

#: ``K_xi(x, y)`` as both arguments go to ±infinity.
XI_TAIL_CONSTANT = 1.0 / 12.0 - 1.0 / (4.0 * math.pi)


def k0(x, y):
    """``Φ(min(x, y)) - Φ(x)Φ(y)``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    # Φ(min) - ΦxΦy written as Φ(min)·(1 - Φ(max)) to keep tail precision.
    return norm_cdf(np.minimum(x, y)) * norm_sf(np.maximum(x, y))


def k_eta(x, y):
    """Covariance of the estimated-parameter process ``√n η_n``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    px, py = norm_pdf(x), norm_pdf(y)
    return k0(x, y) - px * py * (1.0 + 0.5 * x * y)


def _half_bridge_var(x):
    return 0.5 * norm_cdf(x) * norm_sf(x)


def k_xi(x, y):
    """Covariance of the centered process ``√n ξ_n``.

    Equal to ``K_eta(x, y) - m(x) - m(y) + ∫∫K_eta φφ`` with
    ``m(x) = ∫ K_eta(x, z) φ(z) dz = Φ(x)(1-Φ(x))/2 - φ(x)/(2√π)``.
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    # x- and y-terms are summed first so that K(x, y) == K(y, x) bit for bit
    return (
        k_eta(x, y)
        - (_half_bridge_var(x) + _half_bridge_var(y))
        + (norm_pdf(x) + norm_pdf(y)) * _INV_2SQRTPI
        + XI_TAIL_CONSTANT
    )


def k_xi_uncorrected(x, y):
    """The centered-process kernel with ``+Φ(1-Φ)/2`` terms instead of ``-``.

    Kept for comparison only: it is not the covariance of ``√n ξ_n``
    (simulation gives ``Var ξ(0) ≈ 0.0697``, this returns ``0.5697``).
    """
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return k_xi(x, y) + 2.0 * (_half_bridge_var(x) + _half_bridge_var(y))


class KernelKind(str, enum.Enum):
    K0 = "K0"
    K_ETA = "K_eta"
    K_XI = "K_xi"


class Weighting(str, enum.Enum):
    NONE = "none"
    ANDERSON_DARLING = "anderson_darling"


_KERNELS = {KernelKind.K0: k0, KernelKind.K_ETA: k_eta, KernelKind.K_XI: k_xi}


@dataclass(frozen=True)
class KernelSpec:
    """A named kernel with an optional Anderson-Darling weighting.

    The weighting is not applied by :meth:`evaluate`; spectral code applies
    it after the probit change of variables where it stays bounded.
    """

    kind: KernelKind = KernelKind.K_ETA
    weighting: Weighting = Weighting.NONE

    def __post_init__(self):
        object.__setattr__(self, "kind", KernelKind(self.kind))
        object.__setattr__(self, "weighting", Weighting(self.weighting))

    def evaluate(self, x, y):
        return _KERNELS[self.kind](x, y)

    __call__ = evaluate


def diagonal_sup(kernel: KernelSpec | KernelKind | str, grid: int = 4001) -> tuple[float, float]:
    """Return ``(argmax, max)`` of ``x -> K(x, x)`` over [-10, 10]."""
    if not isinstance(kernel, KernelSpec):
        kernel = KernelSpec(kernel)
    if kernel.weighting is not Weighting.NONE:
        raise ValueError("diagonal_sup is defined for unweighted kernels only")
    return maximize_abs(lambda t: kernel(t, t), *WINDOW, grid=grid)
