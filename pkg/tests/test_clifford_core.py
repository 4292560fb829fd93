import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from src.clifford_core import (
    Multivector,
    Signature,
    Versor,
    conjugation,
    gp_arrays,
    left_mult_matrix,
    random_versor,
    random_versor_arrays,
    reversion,
    scalar_part,
    vector_inverse,
)
from src.errors import GradeError, SignatureMismatch

COEFF = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


def _mv(sig, values):
    return Multivector(sig, np.asarray(values, dtype=float))


def test_generators_square_to_minus_one_and_anticommute():
    sig = Signature(4)
    one = Multivector.scalar(sig, 1.0)
    for i in range(1, 5):
        ei = Multivector.basis(sig, i)
        assert (ei * ei).allclose(-one)
        for j in range(i + 1, 5):
            ej = Multivector.basis(sig, j)
            assert (ei * ej + ej * ei).allclose(Multivector.zero(sig))


def test_blade_order_sign():
    sig = Signature(3)
    assert Multivector.blade(sig, 2, 1).allclose(-Multivector.blade(sig, 1, 2))
    # e1 e2 e1 e2 = -e1 e1 e2 e2 = -1
    b = Multivector.blade(sig, 1, 2)
    assert (b * b).allclose(Multivector.scalar(sig, -1.0))


@seed(7)
@settings(max_examples=60, deadline=None)
@given(
    a=arrays(np.float64, (8,), elements=COEFF),
    b=arrays(np.float64, (8,), elements=COEFF),
    c=arrays(np.float64, (8,), elements=COEFF),
)
def test_product_is_associative(a, b, c):
    sig = Signature(3)
    A, B, C = _mv(sig, a), _mv(sig, b), _mv(sig, c)
    lhs = (A * B) * C
    rhs = A * (B * C)
    assert_allclose(lhs.coeffs, rhs.coeffs, atol=1e-9 * (1 + np.abs(lhs.coeffs).max()))


@seed(11)
@settings(max_examples=60, deadline=None)
@given(a=arrays(np.float64, (16,), elements=COEFF), b=arrays(np.float64, (16,), elements=COEFF))
def test_involutions_are_anti_automorphisms(a, b):
    sig = Signature(4)
    A, B = _mv(sig, a), _mv(sig, b)
    assert_allclose(reversion(A * B).coeffs, (reversion(B) * reversion(A)).coeffs, atol=1e-9)
    assert_allclose(conjugation(A * B).coeffs, (conjugation(B) * conjugation(A)).coeffs, atol=1e-9)


@seed(3)
@settings(max_examples=40, deadline=None)
@given(a=arrays(np.float64, (16,), elements=COEFF), b=arrays(np.float64, (16,), elements=COEFF))
def test_scalar_part_of_conjugate_product_is_coefficient_dot(a, b):
    sig = Signature(4)
    A, B = _mv(sig, a), _mv(sig, b)
    assert scalar_part(conjugation(A) * B) == pytest.approx(float(np.dot(a, b)), abs=1e-9)


def test_vector_inverse():
    sig = Signature(3)
    x = Multivector.vector(sig, [1.0, -2.0, 0.5])
    assert (x * vector_inverse(x)).allclose(Multivector.scalar(sig, 1.0))
    with pytest.raises(GradeError, match="zero vector"):
        vector_inverse(Multivector.zero(sig))
    with pytest.raises(GradeError, match="grade-1"):
        vector_inverse(Multivector.blade(sig, 1, 2))


def test_signature_mismatch_and_bounds():
    with pytest.raises(SignatureMismatch):
        Multivector.basis(Signature(2), 1) + Multivector.basis(Signature(3), 1)
    with pytest.raises(ValueError, match="Clifford dimension"):
        Signature(9)


def test_versor_factors_must_be_vectors():
    sig = Signature(3)
    with pytest.raises(GradeError):
        Versor.from_factors([Multivector.blade(sig, 1, 2)])


def test_versor_norm_is_product_of_factor_norms(rng):
    sig = Signature(5)
    v = random_versor(rng, 3, sig)
    expected = np.prod([f.norm() for f in v.factors])
    assert v.norm() == pytest.approx(expected, rel=1e-12)


def test_versor_norm_multiplicativity_bulk(rng):
    """10^4 random (versor, multivector) pairs up to Cl_6."""
    for dim in range(1, 7):
        count = 10_000 // 6 + 1
        a = random_versor_arrays(rng, count, 3, dim)
        b = rng.uniform(-1.0, 1.0, (count, 1 << dim))
        prod = gp_arrays(a, b, dim)
        na = np.linalg.norm(a, axis=1)
        nb = np.linalg.norm(b, axis=1)
        assert np.all(np.abs(np.linalg.norm(prod, axis=1) - na * nb) <= 1e-10 * na * nb)


def test_left_mult_matrix_matches_product(rng):
    dim = 4
    a = rng.normal(size=16)
    b = rng.normal(size=16)
    assert_allclose(left_mult_matrix(a, dim) @ b, gp_arrays(a, b, dim), atol=1e-12)


def test_repr_lists_blades():
    sig = Signature(2)
    assert repr(Multivector.blade(sig, 1, 2, value=2.0)) == "Multivector(+2 * e1e2)"
    assert repr(Multivector.zero(sig)) == "Multivector(0)"
