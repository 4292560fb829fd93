import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st

from src.errors import QuadratureError
from src.polyspace import monomials
from src.quadrature import (
    euclidean_rule,
    omega,
    polar_rule,
    quadrature_rule,
    sphere_area,
    sphere_monomial_integral,
)


def test_omega_values():
    assert omega(2) == pytest.approx(2 * math.pi)
    assert omega(3) == pytest.approx(4 * math.pi)
    assert sphere_area(3) == pytest.approx(2 * math.pi**2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_rule_integrates_constant_to_area(n):
    rule = quadrature_rule(n, 6)
    assert rule.integrate(np.ones(rule.size)) == pytest.approx(sphere_area(n), rel=1e-12)


@pytest.mark.parametrize("n,d", [(1, 8), (2, 8), (3, 6), (4, 4)])
def test_rule_is_exact_on_monomials(n, d):
    rule = quadrature_rule(n, d)
    for degree in range(d + 1):
        for alpha in monomials(n + 1, degree):
            values = np.prod(rule.nodes ** np.array(alpha), axis=1)
            assert rule.integrate(values) == pytest.approx(sphere_monomial_integral(alpha), abs=1e-12)


@seed(5)
@settings(max_examples=10, deadline=None)
@given(rotation_seed=st.integers(min_value=0, max_value=2**31 - 1))
def test_rotation_keeps_exactness(rotation_seed):
    rule = quadrature_rule(2, 6, rotation_seed)
    for alpha in monomials(3, 4):
        values = np.prod(rule.nodes ** np.array(alpha), axis=1)
        assert rule.integrate(values) == pytest.approx(sphere_monomial_integral(alpha), abs=1e-12)


def test_unsupported_rules_raise():
    with pytest.raises(QuadratureError, match="sphere dimension"):
        quadrature_rule(5, 4)
    with pytest.raises(QuadratureError, match="exactness"):
        quadrature_rule(2, 41)


def test_polar_rule_handles_inverse_distance_singularity():
    y = np.array([0.0, 0.6, 0.8])
    rule = polar_rule(y)
    assert np.min(np.linalg.norm(rule.nodes - y, axis=1)) > 0.0
    values = 1.0 / np.linalg.norm(rule.nodes - y, axis=1)
    # potential of the unit shell on its own surface
    assert rule.integrate(values) == pytest.approx(4 * math.pi, rel=1e-10)


@pytest.mark.parametrize("n,s", [(2, 2), (3, 3), (4, 3)])
def test_euclidean_rule_integrates_bubble(n, s):
    rule = euclidean_rule(n, 64, 8)
    value = rule.integrate_function(lambda x: (1.0 + np.sum(x**2, axis=1)) ** (-s))
    expected = math.pi ** (n / 2) * math.gamma(s - n / 2) / math.gamma(s)
    assert float(value) == pytest.approx(expected, rel=1e-10)
