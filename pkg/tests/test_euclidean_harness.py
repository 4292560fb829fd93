import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.conformal import pullback
from src.errors import KernelDegenerateError, QuadratureError
from src.euclidean_harness import (
    RieszKernel,
    _outer_grid,
    convolve_gk,
    euclidean_constant,
    euclidean_ratio,
    kernel_constants,
    kernel_recursion_residual,
    random_rational,
    riesz_kernel,
    smooth_cutoff,
    verify_euclidean_inequality,
    verify_isometry,
    verify_kernel_inequality,
    verify_kernel_transport,
    zero_mode_count,
)
from src.rational_field import decay_order
from src.sphere_spectral import coefficient_norm, dsk_apply, random_field


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_euclidean_constants(n):
    assert euclidean_constant(1, n) == pytest.approx(n)
    assert euclidean_constant(2, n) == pytest.approx(n * (n - 2))


def test_zero_mode_count_sums_multiplicities():
    assert zero_mode_count(2.5, 3, 4) == 48
    assert zero_mode_count(0.7, 3, 4) == 0


def test_kernel_constants_follow_recursion():
    assert_allclose(kernel_constants(3, 4), [1.0, -1.0, 0.5, 0.5])
    assert_allclose(kernel_constants(2, 1), [1.0])


def test_kernel_recursion_breaks_at_k_equal_n():
    with pytest.raises(KernelDegenerateError, match="degenerates"):
        kernel_constants(2, 2)


def test_first_kernel_is_cauchy_kernel(rng):
    g1 = riesz_kernel(1, 3)
    g2 = riesz_kernel(2, 3)
    assert g1.constant == 1.0
    assert kernel_recursion_residual(g2, g1, rng, count=20) < 1e-6


def test_radial_density_is_kernel_times_jacobian(rng):
    kernel = RieszKernel(3, 3, 0.5)
    rho = np.array([0.3, 1.7])
    u = rng.normal(size=(4, 3))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    dens = kernel.radial_density(rho, u)
    for i, r in enumerate(rho):
        assert_allclose(dens[i], kernel.evaluate(r * u) * r**2, rtol=1e-12)


def test_smooth_cutoff_profile():
    r = np.array([0.0, 25.0, 50.0, 80.0])
    assert_allclose(smooth_cutoff(r, 50.0), [1.0, 1.0, 0.0, 0.0])
    mid = smooth_cutoff(np.array([37.5]), 50.0)[0]
    assert mid == pytest.approx(0.5)


def test_random_rational_is_integrable_against_weights(rng):
    for _ in range(5):
        h = random_rational(3, 2, rng)
        assert decay_order(h) >= 3 + 2 * 2 + 2


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (3, 3)])
def test_pullback_ratio_is_scaled_sphere_ratio(n, k, rng):
    psi = random_field(n, 2, rng)
    sphere = coefficient_norm(dsk_apply(psi, k)) / coefficient_norm(psi)
    assert euclidean_ratio(pullback(psi, k), k) == pytest.approx(2.0**k * sphere, rel=1e-6)


def test_euclidean_rows(config):
    for source in ("random_rational", "pullback_random", "pullback_extremal"):
        row = verify_euclidean_inequality(1, 3, 4, source, seed=11, config=config)
        assert row.passed, row.to_dict()
    extremal = verify_euclidean_inequality(2, 3, 1, "pullback_extremal", seed=11, config=config)
    assert extremal.measured["ratio_extremal"] == pytest.approx(3.0, rel=1e-5)


@pytest.mark.slow
@pytest.mark.parametrize("source", ["random_rational", "pullback_random", "pullback_extremal"])
def test_euclidean_rows_thousand_trials(source, config):
    row = verify_euclidean_inequality(1, 2, 1000, source, seed=0xD1AC, threads=4, config=config)
    assert row.passed, row.to_dict()
    assert row.measured["trials"] == (1 if source == "pullback_extremal" else 1000)
    assert row.measured["ratio_min"] >= 2.0 * (1.0 - 1e-6)


def test_euclidean_row_trivial_in_rellich_breakdown(config):
    row = verify_euclidean_inequality(4, 4, 3, seed=1, config=config)
    assert row.status == "trivial"
    assert row.passed
    assert row.checks == ()


def test_unknown_source_is_rejected(config):
    with pytest.raises(ValueError, match="unknown source"):
        verify_euclidean_inequality(1, 2, 1, "nope", config=config)


def test_isometry_row(config):
    row = verify_isometry(2, 3, seed=5, config=config)
    assert row.passed
    assert row.measured["max_relative_error"] < 1e-6


def test_convolution_dimension_guard():
    h = random_rational(4, 1, np.random.default_rng(0))
    with pytest.raises(QuadratureError, match="kernel convolution"):
        convolve_gk(h, 1, np.zeros((1, 4)))


@pytest.mark.slow
@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2)])
def test_kernel_transport_recovers_sphere_inverse(n, k, config):
    row = verify_kernel_transport(n, k, samples=3, seed=2, config=config)
    assert row.passed, row.measured
    assert row.measured["source_gap"] < 1e-8


@pytest.mark.parametrize("n,k", [(2, 2), (3, 3)])
def test_kernel_transport_trivial_without_decay(n, k, config):
    row = verify_kernel_transport(n, k, config=config)
    assert row.status == "trivial"
    assert row.checks == ()


@pytest.mark.parametrize("k,exact", [(2, np.pi**2), (3, np.pi**2 / 4)])
def test_outer_grid_integrates_weight_at_both_resolutions(k, exact):
    # int_{R^3} (1 + r^2)^{-k} dx
    assert _outer_grid(3, k, 12, 4)[1].sum() == pytest.approx(exact, rel=1e-10)
    assert _outer_grid(3, k, 24, 8)[1].sum() == pytest.approx(exact, rel=1e-10)


@pytest.mark.slow
def test_kernel_bound_row(config):
    row = verify_kernel_inequality(1, 3, 1, seed=2, config=config)
    assert row.passed, row.measured
    measured = row.measured
    assert measured["quadrature_error"] == pytest.approx(measured["inner_error"] + measured["outer_error"])
    assert row.checks[0].bound == pytest.approx(1.0 + measured["quadrature_error"])
    trivial = verify_kernel_inequality(2, 2, 1, config=config)
    assert trivial.status == "trivial"
