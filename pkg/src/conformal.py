"""
Moebius maps in Vahlen form y = (ax + b)(cx + d)^{-1} over Cl_{n+1}, the
Cayley transform R^n -> S^n, the conformal weights J_k and the transport of
band-limited sphere fields into the Euclidean rational class.

R^n sits inside R^{n+1} as span{e_1, ..., e_n}; e = e_{n+1} is the north pole.
"""
import math
from dataclasses import dataclass

import numpy as np

from src.clifford_core import (
    Multivector,
    Signature,
    conjugation,
    embed_vectors,
    reversion,
)
from src.errors import SingularityError
from src.polyspace import MvPolynomial, monomial_index, monomials, radius_power_coeffs
from src.quadrature import QuadratureRule
from src.rational_field import RationalField, d_power_apply, weighted_inner
from src.sphere_spectral import SphericalField, basis_tensor, dsk_apply, l2_inner

POLE_TOL = 1e-12
GRADE_TOL = 1e-10


@dataclass(frozen=True)
class MobiusMap:
    a: Multivector
    b: Multivector
    c: Multivector
    d: Multivector

    @property
    def sig(self) -> Signature:
        return self.a.sig


def is_versor(x: Multivector, tol: float = GRADE_TOL) -> bool:
    """x conj(x) is a nonzero scalar and x v conj(x) stays a vector for each generator v."""
    sig = x.sig
    norm_sq = x * conjugation(x)
    if norm_sq.grades(tol) - {0} or abs(norm_sq.coeffs[0]) <= tol:
        return False
    for i in range(1, sig.dim + 1):
        image = x * Multivector.basis(sig, i) * conjugation(x)
        if not image.is_vector(tol):
            return False
    return True


def _versor_or_zero(x: Multivector) -> bool:
    return x.norm() == 0.0 or is_versor(x)


def ahlfors_report(M: MobiusMap) -> dict:
    """
    Vahlen conditions. The pseudo-determinant is evaluated as a~d - c~c
    (as conventionally printed) and as a~d - b~c; validity uses the first.
    """
    a, b, c, d = M.a, M.b, M.c, M.d
    versors = all(_versor_or_zero(x) for x in (a, b, c, d))
    products = [a * reversion(c), reversion(c) * d, reversion(d) * b, reversion(b) * a]
    vector_products = all(p.is_vector(GRADE_TOL) for p in products)
    verbatim = a * reversion(d) - c * reversion(c)
    variant = a * reversion(d) - b * reversion(c)

    def _nonzero_scalar(x: Multivector) -> bool:
        return not (x.grades(GRADE_TOL) - {0}) and abs(x.coeffs[0]) > GRADE_TOL

    verbatim_ok = _nonzero_scalar(verbatim)
    return {
        "versors": versors,
        "vector_products": vector_products,
        "pseudo_determinant_verbatim": float(verbatim.coeffs[0]),
        "verbatim_ok": verbatim_ok,
        "pseudo_determinant_variant": float(variant.coeffs[0]),
        "variant_ok": _nonzero_scalar(variant),
        "valid": versors and vector_products and verbatim_ok,
    }


def _inverse(x: Multivector) -> Multivector:
    """Inverse of a versor: conj(x) / (x conj(x))."""
    norm_sq = (x * conjugation(x)).coeffs[0]
    if abs(norm_sq) < POLE_TOL**2:
        raise SingularityError("cx + d is not invertible")
    return conjugation(x) / norm_sq


def apply_mobius(M: MobiusMap, x) -> np.ndarray:
    """Vector components (length dim) of (ax + b)(cx + d)^{-1}."""
    sig = M.sig
    if not isinstance(x, Multivector):
        x = Multivector.vector(sig, np.asarray(x, dtype=float))
    den = M.c * x + M.d
    if den.norm() < POLE_TOL:
        raise SingularityError("point is a pole of the Moebius map")
    out = (M.a * x + M.b) * _inverse(den)
    return out.vector_part()


def north_pole(n: int) -> Multivector:
    return Multivector.basis(Signature(n + 1), n + 1)


def cayley_map(n: int) -> MobiusMap:
    """(e x + 1)(x + e)^{-1}."""
    sig = Signature(n + 1)
    e = north_pole(n)
    one = Multivector.scalar(sig, 1.0)
    return MobiusMap(a=e, b=one, c=one, d=e)


def cayley(x: np.ndarray) -> np.ndarray:
    """Closed form (-2x + (|x|^2 - 1) e) / (1 + |x|^2); rows of x map to rows on S^n."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    r2 = np.sum(x**2, axis=1, keepdims=True)
    out = np.concatenate([-2.0 * x, r2 - 1.0], axis=1) / (1.0 + r2)
    return out[0] if single else out


def cayley_inverse(w: np.ndarray) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    single = w.ndim == 1
    w = np.atleast_2d(w)
    denom = 1.0 - w[:, -1]
    if np.any(np.abs(denom) < POLE_TOL):
        raise SingularityError("the north pole has no preimage under the Cayley transform")
    out = -w[:, :-1] / denom[:, None]
    return out[0] if single else out


def jk_weight_values(k: int, x: np.ndarray) -> np.ndarray:
    """J_k(C, x) at rows of x, as (P, 2^{n+1}) coefficients."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    n = x.shape[1]
    r2 = np.sum(x**2, axis=1)
    out = np.zeros((x.shape[0], 1 << (n + 1)))
    if k % 2:
        scale = 2.0 ** ((n - k) / 2.0) * (1.0 + r2) ** (-(n - k + 1) / 2.0)
        vec = np.concatenate([x, np.ones((x.shape[0], 1))], axis=1)
        out = embed_vectors(vec * scale[:, None], n + 1)
    else:
        out[:, 0] = 2.0 ** ((n - k) / 2.0) * (1.0 + r2) ** (-(n - k) / 2.0)
    return out


def jk_weight(k: int, x: np.ndarray) -> Multivector:
    x = np.asarray(x, dtype=float)
    return Multivector(Signature(x.shape[-1] + 1), jk_weight_values(k, x)[0])


def jacobian(M: MobiusMap, x: np.ndarray) -> float:
    """|a~d - b~c|^n / |cx + d|^{2n}; for Cayley this is 2^n / (1 + |x|^2)^n."""
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    xv = Multivector.vector(M.sig, x)
    den = M.c * xv + M.d
    lam = abs((M.a * reversion(M.d) - M.b * reversion(M.c)).coeffs[0])
    return float(lam**n / den.norm() ** (2 * n))


def intertwine_sign(k: int) -> int:
    """Orientation factor between D^k J_k (psi o C) and J_{-k} (D_S^(k) psi) o C."""
    return -1 if k % 2 else 1


def jk_field(k: int, n: int) -> RationalField:
    """J_k(C, x) as a rational field."""
    dim = n + 1
    scale = 2.0 ** ((n - k) / 2.0)
    if k % 2:
        e = np.zeros(1 << dim)
        e[1 << n] = scale
        terms = {
            (1, n - k + 1): MvPolynomial.identity_vector(n, dim).scale(scale),
            (0, n - k + 1): MvPolynomial.constant(n, dim, e),
        }
    else:
        one = np.zeros(1 << dim)
        one[0] = scale
        terms = {(0, n - k): MvPolynomial.constant(n, dim, one)}
    return RationalField(n, terms)


def _compose_with_cayley(coeffs: np.ndarray, m: int, n: int) -> dict[int, MvPolynomial]:
    """
    p(-2x + (r^2 - 1) e) for a degree-m polynomial p in n+1 variables,
    split into homogeneous parts in x.
    """
    dim = n + 1
    out: dict[int, np.ndarray] = {}
    for alpha, coef in zip(monomials(dim, m), coeffs):
        if not np.any(coef):
            continue
        head, top = alpha[:n], alpha[n]
        base = sum(head)
        for i in range(top + 1):
            c = math.comb(top, i) * (-1) ** (top - i) * (-2.0) ** base
            deg = base + 2 * i
            index = monomial_index(n, deg)
            block = out.setdefault(deg, np.zeros((len(index), 1 << dim)))
            for beta, rc in zip(monomials(n, 2 * i), radius_power_coeffs(n, i)):
                if rc:
                    block[index[tuple(h + b for h, b in zip(head, beta))]] += c * rc * coef
    return {deg: MvPolynomial(n, dim, deg, arr) for deg, arr in out.items()}


def sphere_field_on_cayley(psi: SphericalField) -> RationalField:
    """psi(C(x)) as an exact rational field."""
    n = psi.n
    dim = n + 1
    pairs = []
    x_vec = MvPolynomial.identity_vector(n, dim)
    e = np.zeros(1 << dim)
    e[1 << n] = 1.0
    cayley_vector = {
        (1, 2): x_vec.scale(-2.0),
        (2, 2): MvPolynomial.from_terms(
            n, dim, 2, {tuple(2 if i == j else 0 for i in range(n)): e for j in range(n)}
        ),
        (0, 2): MvPolynomial.constant(n, dim, -e),
    }
    w_of_x = RationalField(n, cayley_vector)
    for m, a, b in psi.components:
        tensor = basis_tensor(n, m)
        for coeff_vec, with_w in ((a, False), (b, True)):
            if not np.any(coeff_vec):
                continue
            parts = _compose_with_cayley(np.tensordot(coeff_vec, tensor, axes=1), m, n)
            field = RationalField(n, {(deg, 2 * m): p for deg, p in parts.items()})
            if with_w:
                field = w_of_x * field
            pairs.append(field)
    out = RationalField.zero(n)
    for field in pairs:
        out = out + field
    return out


def pullback(psi: SphericalField, k: int) -> RationalField:
    """phi(x) = J_k(C, x) psi(C(x))."""
    return jk_field(k, psi.n) * sphere_field_on_cayley(psi)


def isometric_transform(psi: SphericalField) -> RationalField:
    """sqrt(2) (1 + |x|^2)^{-1/2} J_1(C, x) psi(C(x)); an isometry L^2(S^n) -> L^2(R^n)."""
    return pullback(psi, 1).shift(1).scale(math.sqrt(2.0))


def intertwine_residual(psi: SphericalField, k: int, sample_points: np.ndarray) -> float:
    """max |D^k[J_k psi o C] - (-1)^k J_{-k} (D_S^(k) psi) o C| over the samples."""
    sample_points = np.atleast_2d(np.asarray(sample_points, dtype=float))
    lhs = d_power_apply(pullback(psi, k), k).evaluate(sample_points)
    rhs = pullback(dsk_apply(psi, k), -k).scale(float(intertwine_sign(k))).evaluate(sample_points)
    if lhs.size == 0:
        return 0.0
    return float(np.max(np.linalg.norm(lhs - rhs, axis=1)))


def isometry_check(
    psi: SphericalField,
    phi: SphericalField,
    rule: QuadratureRule,
    radial_nodes: int = 200,
    angular_degree: int = 16,
) -> tuple[float, float]:
    """(sphere inner product, Euclidean inner product of the transported pair)."""
    sphere = l2_inner(psi, phi, rule)
    euclid = weighted_inner(
        isometric_transform(psi),
        isometric_transform(phi),
        0,
        radial_nodes=radial_nodes,
        angular_degree=angular_degree,
    )
    return sphere, euclid
