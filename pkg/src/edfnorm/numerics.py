"""Normal-distribution special functions, composite Gauss-Legendre quadrature
and a one-dimensional absolute-value maximizer.

Everything here is vectorized over numpy arrays and free of shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special

__all__ = [
    "QuadratureRule",
    "norm_pdf",
    "norm_cdf",
    "norm_sf",
    "norm_logcdf",
    "norm_quantile",
    "gauss_legendre",
    "composite_gauss_legendre",
    "default_rule",
    "integrate_gauss",
    "maximize_abs",
]

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: Truncation window for all integrals against the normal density.
WINDOW = (-10.0, 10.0)


def norm_pdf(x):
    """Standard normal density."""
    x = np.asarray(x, dtype=float)
    return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def norm_cdf(x):
    """Standard normal distribution function, accurate in both tails."""
    return special.ndtr(np.asarray(x, dtype=float))


def norm_sf(x):
    """Upper tail ``1 - norm_cdf(x)`` without cancellation for large x."""
    return special.ndtr(-np.asarray(x, dtype=float))


def norm_logcdf(x):
    """``log Φ(x)``, accurate deep in the lower tail where ``Φ`` underflows."""
    return special.log_ndtr(np.asarray(x, dtype=float))


def norm_quantile(p):
    """Inverse of :func:`norm_cdf`.

    One Newton step is applied on top of the library inverse so that the
    round trip ``norm_cdf(norm_quantile(p))`` is accurate to ~1e-16.

    Raises
    ------
    ValueError
        If any ``p`` lies outside the open interval (0, 1).
    """
    p = np.asarray(p, dtype=float)
    if np.any(~((p > 0.0) & (p < 1.0))):
        raise ValueError("norm_quantile requires 0 < p < 1")
    x = special.ndtri(p)
    # Newton on whichever tail keeps the residual well conditioned.
    resid = np.where(x < 0, norm_cdf(x) - p, (1.0 - p) - norm_sf(x))
    dens = norm_pdf(x)
    step = np.divide(resid, dens, out=np.zeros_like(x), where=dens > 0)
    x = x - step
    return x if x.ndim else float(x)


@dataclass(frozen=True)
class QuadratureRule:
    """Fixed nodes and positive weights on an interval.

    Attributes
    ----------
    nodes : ndarray
        Strictly increasing abscissas inside ``interval``.
    weights : ndarray
        Positive weights, summing to the interval length.
    interval : tuple of float
        ``(lo, hi)``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError("interval must satisfy lo < hi")
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-d arrays of equal length")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if np.any(np.diff(self.nodes) <= 0):
            raise ValueError("quadrature nodes must be strictly increasing")
        if self.nodes[0] <= lo or self.nodes[-1] >= hi:
            raise ValueError("quadrature nodes must be interior to the interval")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return self.nodes.size

    def __hash__(self):
        return hash((self.interval, self.nodes.size, self.nodes.tobytes()))

    def __eq__(self, other):
        if not isinstance(other, QuadratureRule):
            return NotImplemented
        return (
            self.interval == other.interval
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )


def gauss_legendre(n: int, lo: float = -1.0, hi: float = 1.0) -> QuadratureRule:
    """Single-panel ``n``-point Gauss-Legendre rule on ``(lo, hi)``."""
    t, w = special.roots_legendre(n)
    half = 0.5 * (hi - lo)
    return QuadratureRule(0.5 * (hi + lo) + half * t, half * w, (float(lo), float(hi)))


def composite_gauss_legendre(
    lo: float, hi: float, panel_width: float = 0.5, nodes_per_panel: int = 256
) -> QuadratureRule:
    """Gauss-Legendre rule repeated over equal panels covering ``(lo, hi)``.

    The number of panels is ``ceil((hi - lo) / panel_width)``; panel edges
    are equispaced so the nominal width is an upper bound.
    """
    n_panels = max(1, math.ceil((hi - lo) / panel_width - 1e-12))
    t, w = special.roots_legendre(nodes_per_panel)
    edges = np.linspace(lo, hi, n_panels + 1)
    left, right = edges[:-1, None], edges[1:, None]
    half = 0.5 * (right - left)
    nodes = (0.5 * (left + right) + half * t).ravel()
    weights = (half * w).ravel()
    return QuadratureRule(nodes, weights, (float(lo), float(hi)))


_DEFAULT_RULE: QuadratureRule | None = None


def default_rule() -> QuadratureRule:
    """Composite rule on [-10, 10]: 40 panels of width 0.5, 256 nodes each."""
    global _DEFAULT_RULE
    if _DEFAULT_RULE is None:
        _DEFAULT_RULE = composite_gauss_legendre(*WINDOW)
    return _DEFAULT_RULE


def integrate_gauss(f: Callable, rule: QuadratureRule | None = None) -> float:
    """Approximate ``∫ f`` over ``rule.interval`` as ``Σ w_i f(x_i)``.

    ``f`` is called once with the full node array.

    Raises
    ------
    FloatingPointError
        If ``f`` is not finite at some node; the message names the first one.
    """
    rule = default_rule() if rule is None else rule
    with np.errstate(all="ignore"):
        values = np.broadcast_to(np.asarray(f(rule.nodes), dtype=float), rule.nodes.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        i = int(np.argmax(bad))
        raise FloatingPointError(
            f"integrand is not finite at node x={rule.nodes[i]!r} (value {values[i]!r})"
        )
    return float(np.dot(rule.weights, values))


def _golden_max(g: Callable[[float], float], a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol:
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - _GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _GOLDEN * (b - a)
            gd = g(d)
    x = 0.5 * (a + b)
    return x, g(x)


def maximize_abs(
    f: Callable, lo: float, hi: float, grid: int = 4001, tol: float = 1e-10
) -> tuple[float, float]:
    """Locate ``sup |f|`` on ``[lo, hi]``.

    A scan over ``grid`` equispaced points finds the best sample; golden
    section search then refines within the two neighbouring grid cells.
    Ties in the scan go to the smallest abscissa.

    Parameters
    ----------
    f : callable
        Vectorized real function.
    lo, hi : float
        Search interval, ``lo < hi``.
    grid : int
        Number of scan points, at least 64.
    tol : float
        Final bracket width of the golden-section stage.

    Returns
    -------
    argmax : float
    max : float
        ``|f(argmax)|``, never smaller than any scanned value.
    """
    if not lo < hi:
        raise ValueError("maximize_abs requires lo < hi")
    if grid < 64:
        raise ValueError("maximize_abs requires grid >= 64")
    xs = np.linspace(lo, hi, grid)
    vals = np.abs(np.asarray(f(xs), dtype=float))
    k = int(np.argmax(vals))
    best_x, best_v = float(xs[k]), float(vals[k])

    a, b = float(xs[max(k - 1, 0)]), float(xs[min(k + 1, grid - 1)])

    def g(x):
        return float(np.abs(f(np.array([x]))[0]))

    x_ref, v_ref = _golden_max(g, a, b, tol)
    if v_ref > best_v:
        best_x, best_v = x_ref, v_ref
    return best_x, best_v
