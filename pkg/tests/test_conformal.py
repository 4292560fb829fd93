import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.clifford_core import gp_arrays
from src.conformal import (
    ahlfors_report,
    apply_mobius,
    cayley,
    cayley_inverse,
    cayley_map,
    intertwine_residual,
    intertwine_sign,
    isometry_check,
    jacobian,
    jk_field,
    jk_weight_values,
    isometric_transform,
    pullback,
    sphere_field_on_cayley,
)
from src.errors import SingularityError
from src.rational_field import weighted_l2
from src.sphere_spectral import SphericalField, default_rule, random_field


def test_cayley_lands_on_sphere_and_inverts(rng):
    x = rng.uniform(-3.0, 3.0, (20, 3))
    w = cayley(x)
    assert_allclose(np.linalg.norm(w, axis=1), 1.0, rtol=1e-14)
    assert_allclose(cayley_inverse(w), x, atol=1e-12)


def test_vahlen_form_matches_closed_form(rng):
    M = cayley_map(3)
    for x in rng.uniform(-2.0, 2.0, (10, 3)):
        assert_allclose(apply_mobius(M, x), cayley(x), atol=1e-12)


def test_north_pole_has_no_preimage():
    with pytest.raises(SingularityError, match="north pole"):
        cayley_inverse(np.array([0.0, 0.0, 1.0]))


def test_ahlfors_conditions_for_cayley():
    report = ahlfors_report(cayley_map(2))
    assert report["versors"] and report["vector_products"]
    assert report["valid"]
    assert report["pseudo_determinant_verbatim"] == pytest.approx(-2.0)
    assert report["variant_ok"]


@pytest.mark.parametrize("n", [2, 3])
def test_jacobian_of_cayley(n, rng):
    M = cayley_map(n)
    for x in rng.uniform(-2.0, 2.0, (5, n)):
        r2 = float(x @ x)
        assert jacobian(M, x) == pytest.approx(2.0**n / (1.0 + r2) ** n, rel=1e-12)


@pytest.mark.parametrize("k", [-3, -2, -1, 1, 2, 3])
def test_weight_field_matches_closed_form(k, rng):
    x = rng.uniform(-2.0, 2.0, (8, 3))
    assert_allclose(jk_field(k, 3).evaluate(x), jk_weight_values(k, x), atol=1e-12)


def test_sphere_field_transport_is_exact(rng):
    psi = random_field(2, 3, rng)
    x = rng.uniform(-2.0, 2.0, (12, 2))
    assert_allclose(sphere_field_on_cayley(psi).evaluate(x), psi.evaluate(cayley(x)), atol=1e-10)


def test_pullback_is_pointwise_product(rng):
    psi = random_field(3, 2, rng)
    x = rng.uniform(-1.0, 1.0, (6, 3))
    expected = gp_arrays(jk_weight_values(2, x), psi.evaluate(cayley(x)), 4)
    assert_allclose(pullback(psi, 2).evaluate(x), expected, atol=1e-10)


def test_intertwine_sign():
    assert [intertwine_sign(k) for k in (1, 2, 3, 4)] == [-1, 1, -1, 1]


@pytest.mark.parametrize("n", [2, 3])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_dirac_powers_intertwine_through_cayley(n, k, rng):
    psi = random_field(n, 2, rng)
    x = rng.uniform(-2.0, 2.0, (30, n))
    assert intertwine_residual(psi, k, x) <= 1e-8


@pytest.mark.parametrize("n", [2, 3])
def test_transform_is_isometric(n, rng):
    rule = default_rule(n, 2)
    for _ in range(3):
        psi = random_field(n, 2, rng)
        phi = random_field(n, 2, rng)
        sphere, euclid = isometry_check(psi, phi, rule)
        assert euclid == pytest.approx(sphere, rel=1e-6, abs=1e-6)


def test_isometric_transform_norm_of_constant():
    one = np.zeros(8)
    one[0] = 1.0
    psi = SphericalField(2, ((0, one, np.zeros(8)),))
    assert weighted_l2(isometric_transform(psi), 0) == pytest.approx(4 * math.pi, rel=1e-10)
