import functools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from edfnorm.kernels import (
    XI_TAIL_CONSTANT,
    KernelKind,
    KernelSpec,
    diagonal_sup,
    k0,
    k_eta,
    k_xi,
    k_xi_uncorrected,
)
from edfnorm.numerics import norm_cdf, norm_pdf

KERNELS = [k0, k_eta, k_xi]
finite = st.floats(-10, 10)


def _mean_against_phi(x):
    # ∫ K_eta(x, z) φ(z) dz, split at the kink z = x
    return quad(lambda z: k_eta(x, z) * norm_pdf(z), -12, 12, points=[x], epsabs=1e-13, limit=200)[0]


@functools.lru_cache(maxsize=1)
def _double_mean():
    return quad(lambda t: _mean_against_phi(t) * norm_pdf(t), -12, 12, epsabs=1e-13, limit=200)[0]


def k_xi_by_quadrature(x, y):
    """Covariance of η - ∫η φ from K_eta by direct integration."""
    return k_eta(x, y) - _mean_against_phi(x) - _mean_against_phi(y) + _double_mean()


def test_k0_values():
    assert k0(0.0, 0.0) == pytest.approx(0.25, abs=1e-15)
    assert k0(0.0, 1.0) == pytest.approx(0.5 * (1 - 0.8413447461), abs=1e-10)
    assert k0(0.0, 1.0) == pytest.approx(0.0793276, abs=1e-7)


def test_k_eta_values():
    assert k_eta(0.0, 0.0) == pytest.approx(0.25 - 1 / (2 * math.pi), abs=1e-15)
    assert k_eta(0.0, 0.0) == pytest.approx(0.0908451, abs=1e-7)
    tail = norm_cdf(8.0) * norm_cdf(-8.0)
    assert k_eta(8.0, 8.0) == pytest.approx(tail, rel=1e-6)
    assert k_eta(-8.0, -8.0) == pytest.approx(tail, rel=1e-6)
    assert tail == pytest.approx(6.2e-16, rel=0.01)


def test_k_xi_center_value():
    # K_eta(0,0) - Φ(0)(1-Φ(0)) + 2φ(0)/(2√π) + 1/12 - 1/(4π)
    expected = 0.25 - 1 / (2 * math.pi) - 0.25 + 1 / (math.sqrt(2 * math.pi) * math.sqrt(math.pi)) + XI_TAIL_CONSTANT
    assert k_xi(0.0, 0.0) == pytest.approx(expected, abs=1e-15)
    assert k_xi(0.0, 0.0) == pytest.approx(0.0696800, abs=1e-7)


def test_uncorrected_form_center_value():
    assert k_xi_uncorrected(0.0, 0.0) == pytest.approx(0.569680, abs=1e-6)


def test_k_xi_far_corners():
    assert k_xi(-10.0, 10.0) == pytest.approx(0.0037557, abs=1e-6)
    assert XI_TAIL_CONSTANT == pytest.approx(1 / 12 - 1 / (4 * math.pi))


@pytest.mark.parametrize("x, y", [(0.0, 0.0), (-1.0, 1.0), (0.5, 2.0), (-2.5, -0.3)])
def test_k_xi_is_covariance_of_centered_process(x, y):
    assert k_xi(x, y) == pytest.approx(k_xi_by_quadrature(x, y), abs=1e-8)


@pytest.mark.parametrize("kernel", KERNELS)
def test_symmetry_random_pairs(kernel):
    rng = np.random.default_rng(11)
    x, y = rng.uniform(-10, 10, (2, 10_000))
    assert np.max(np.abs(kernel(x, y) - kernel(y, x))) <= 1e-14


@pytest.mark.parametrize("kernel", KERNELS)
@given(st.lists(finite, min_size=1, max_size=50, unique=True))
@settings(max_examples=40, deadline=None)
def test_gram_positive_semidefinite(kernel, nodes):
    x = np.array(nodes)
    gram = kernel(x[:, None], x[None, :])
    assert np.linalg.eigvalsh(0.5 * (gram + gram.T)).min() >= -1e-8


@given(finite)
def test_diagonals_nonnegative_and_ordered(x):
    assert k_eta(x, x) >= -1e-12
    assert k_xi(x, x) >= -1e-12
    assert k_eta(x, x) <= k0(x, x)


@pytest.mark.parametrize("x", [-10.0, 10.0])
def test_diagonal_tail_limits(x):
    assert abs(k_eta(x, x)) <= 1e-10
    assert abs(k_xi(x, x) - XI_TAIL_CONSTANT) <= 1e-10


class TestDiagonalSup:
    def test_k0(self):
        x, v = diagonal_sup(KernelKind.K0)
        assert abs(x) <= 1e-8
        assert v == pytest.approx(0.25, abs=1e-14)

    def test_k_eta(self):
        x, v = diagonal_sup("K_eta")
        assert v >= k_eta(0.0, 0.0) - 1e-12
        fine = np.linspace(-10, 10, 200_001)
        assert v >= k_eta(fine, fine).max() - 1e-12

    def test_k_xi(self):
        x, v = diagonal_sup(KernelSpec("K_xi"))
        assert v >= k_xi(0.0, 0.0) - 1e-12
        fine = np.linspace(-10, 10, 200_001)
        assert v >= k_xi(fine, fine).max() - 1e-12

    def test_weighted_rejected(self):
        with pytest.raises(ValueError):
            diagonal_sup(KernelSpec("K_eta", "anderson_darling"))


def test_kernel_spec_dispatch():
    spec = KernelSpec("K_xi")
    assert spec.kind is KernelKind.K_XI
    assert spec(0.3, -0.4) == k_xi(0.3, -0.4)
