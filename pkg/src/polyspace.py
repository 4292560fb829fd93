"""
Homogeneous Cl_N-valued polynomials and their exact calculus.

A polynomial of degree m in ``num_vars`` variables is stored densely: one row of
2^N Clifford coefficients per exponent multi-index of total degree m. Linear
operators (Dirac, Laplacian, multiplication by x) are built as Kronecker
products of monomial matrices with Clifford left-multiplication matrices, so
kernels and splittings reduce to numerical linear algebra (scipy.linalg).
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np
import scipy.linalg

from src.clifford_core import Signature, embed_vectors, gp_arrays, left_mult_matrix
from src.errors import NotHarmonicError, NotMonogenicError, SingularityError

NULL_RCOND = 1e-10


@lru_cache(maxsize=None)
def monomials(num_vars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples of total degree ``degree``, in a fixed order."""
    if degree < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(num_vars), degree):
        exps = [0] * num_vars
        for j in combo:
            exps[j] += 1
        out.append(tuple(exps))
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(num_vars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {alpha: i for i, alpha in enumerate(monomials(num_vars, degree))}


@lru_cache(maxsize=None)
def _exponent_array(num_vars: int, degree: int) -> np.ndarray:
    arr = np.array(monomials(num_vars, degree), dtype=np.int64).reshape(-1, num_vars)
    arr.setflags(write=False)
    return arr


def monomial_values(points: np.ndarray, degree: int) -> np.ndarray:
    """(P, num_vars) points -> (P, #monomials) values of x^alpha."""
    points = np.asarray(points, dtype=float)
    exps = _exponent_array(points.shape[-1], degree)
    if exps.shape[0] == 0:
        return np.zeros(points.shape[:-1] + (0,))
    return np.prod(points[..., None, :] ** exps, axis=-1)


@lru_cache(maxsize=None)
def derivative_matrix(num_vars: int, degree: int, j: int) -> np.ndarray:
    """d/dx_j from degree ``degree`` monomials to degree - 1."""
    src = monomials(num_vars, degree)
    dst = monomial_index(num_vars, degree - 1)
    mat = np.zeros((len(dst), len(src)))
    for col, alpha in enumerate(src):
        if alpha[j] > 0:
            beta = alpha[:j] + (alpha[j] - 1,) + alpha[j + 1 :]
            mat[dst[beta], col] = alpha[j]
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=None)
def multiply_matrix(num_vars: int, degree: int, j: int) -> np.ndarray:
    """Multiplication by x_j from degree ``degree`` monomials to degree + 1."""
    src = monomials(num_vars, degree)
    dst = monomial_index(num_vars, degree + 1)
    mat = np.zeros((len(dst), len(src)))
    for col, alpha in enumerate(src):
        beta = alpha[:j] + (alpha[j] + 1,) + alpha[j + 1 :]
        mat[dst[beta], col] = 1.0
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=None)
def generator_matrix(dim: int, j: int) -> np.ndarray:
    """Left multiplication by e_{j+1} on Cl_dim coefficients."""
    unit = np.zeros(1 << dim)
    unit[1 << j] = 1.0
    mat = left_mult_matrix(unit, dim)
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True, eq=False)
class MvPolynomial:
    """Homogeneous polynomial R^num_vars -> Cl_dim of a single degree."""

    num_vars: int
    dim: int
    degree: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        shape = (len(monomials(self.num_vars, self.degree)), 1 << self.dim)
        if coeffs.shape != shape:
            raise ValueError(f"expected coefficient shape {shape}, got {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def sig(self) -> Signature:
        return Signature(self.dim)

    @property
    def ambient_dim(self) -> int:
        return self.num_vars

    @property
    def terms(self) -> dict[tuple[int, ...], np.ndarray]:
        """Nonzero coefficients keyed by exponent multi-index."""
        return {
            alpha: self.coeffs[i].copy()
            for i, alpha in enumerate(monomials(self.num_vars, self.degree))
            if np.any(self.coeffs[i] != 0.0)
        }

    @classmethod
    def zero(cls, num_vars: int, dim: int, degree: int) -> "MvPolynomial":
        return cls(num_vars, dim, degree, np.zeros((len(monomials(num_vars, degree)), 1 << dim)))

    @classmethod
    def from_terms(cls, num_vars: int, dim: int, degree: int, terms: dict) -> "MvPolynomial":
        coeffs = np.zeros((len(monomials(num_vars, degree)), 1 << dim))
        index = monomial_index(num_vars, degree)
        for alpha, value in terms.items():
            if sum(alpha) != degree:
                raise ValueError(f"monomial {alpha} is not of degree {degree}")
            coeffs[index[tuple(alpha)]] += np.asarray(value, dtype=float)
        return cls(num_vars, dim, degree, coeffs)

    @classmethod
    def constant(cls, num_vars: int, dim: int, value: np.ndarray) -> "MvPolynomial":
        return cls(num_vars, dim, 0, np.asarray(value, dtype=float).reshape(1, 1 << dim))

    @classmethod
    def identity_vector(cls, num_vars: int, dim: int) -> "MvPolynomial":
        """x = sum_j x_j e_j."""
        terms = {}
        for j in range(num_vars):
            alpha = tuple(1 if i == j else 0 for i in range(num_vars))
            unit = np.zeros(1 << dim)
            unit[1 << j] = 1.0
            terms[alpha] = unit
        return cls.from_terms(num_vars, dim, 1, terms)

    def _same_space(self, other: "MvPolynomial") -> None:
        if (self.num_vars, self.dim, self.degree) != (other.num_vars, other.dim, other.degree):
            raise ValueError("polynomials live in different spaces")

    def __add__(self, other: "MvPolynomial") -> "MvPolynomial":
        self._same_space(other)
        return MvPolynomial(self.num_vars, self.dim, self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other: "MvPolynomial") -> "MvPolynomial":
        self._same_space(other)
        return MvPolynomial(self.num_vars, self.dim, self.degree, self.coeffs - other.coeffs)

    def __neg__(self) -> "MvPolynomial":
        return self.scale(-1.0)

    def scale(self, factor: float) -> "MvPolynomial":
        return MvPolynomial(self.num_vars, self.dim, self.degree, self.coeffs * factor)

    def left_mul(self, value: np.ndarray) -> "MvPolynomial":
        """Constant Clifford factor on the left."""
        return MvPolynomial(self.num_vars, self.dim, self.degree, gp_arrays(np.asarray(value), self.coeffs, self.dim))

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs) <= tol))

    def allclose(self, other: "MvPolynomial", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        self._same_space(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol))

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """(P, num_vars) -> (P, 2^dim)."""
        return monomial_values(points, self.degree) @ self.coeffs

    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)


def partial(p: MvPolynomial, j: int) -> MvPolynomial:
    if p.degree == 0:
        return MvPolynomial.zero(p.num_vars, p.dim, 0)
    mat = derivative_matrix(p.num_vars, p.degree, j)
    return MvPolynomial(p.num_vars, p.dim, p.degree - 1, mat @ p.coeffs)


def dirac_apply(p: MvPolynomial) -> MvPolynomial:
    """D p = sum_j e_j dp/dx_j; a constant maps to the zero polynomial of degree 0."""
    if p.degree == 0:
        return MvPolynomial.zero(p.num_vars, p.dim, 0)
    out = np.zeros((len(monomials(p.num_vars, p.degree - 1)), 1 << p.dim))
    for j in range(p.num_vars):
        out += derivative_matrix(p.num_vars, p.degree, j) @ p.coeffs @ generator_matrix(p.dim, j).T
    return MvPolynomial(p.num_vars, p.dim, p.degree - 1, out)


def vector_multiply(p: MvPolynomial) -> MvPolynomial:
    """x p with x = sum_j x_j e_j acting by Clifford left multiplication."""
    out = np.zeros((len(monomials(p.num_vars, p.degree + 1)), 1 << p.dim))
    for j in range(p.num_vars):
        out += multiply_matrix(p.num_vars, p.degree, j) @ p.coeffs @ generator_matrix(p.dim, j).T
    return MvPolynomial(p.num_vars, p.dim, p.degree + 1, out)


def euler_apply(p: MvPolynomial) -> MvPolynomial:
    """sum_j x_j dp/dx_j, computed term by term."""
    if p.degree == 0:
        return MvPolynomial.zero(p.num_vars, p.dim, 0)
    out = np.zeros_like(p.coeffs)
    for j in range(p.num_vars):
        out += multiply_matrix(p.num_vars, p.degree - 1, j) @ derivative_matrix(p.num_vars, p.degree, j) @ p.coeffs
    return MvPolynomial(p.num_vars, p.dim, p.degree, out)


def gamma_apply(p: MvPolynomial) -> MvPolynomial:
    """
    Gamma p = x D p + E p (= x wedge D). Monogenics of degree m get +m.
    """
    euler = euler_apply(p)
    if p.degree == 0:
        return euler
    return vector_multiply(dirac_apply(p)) + euler


def laplacian_apply(p: MvPolynomial) -> MvPolynomial:
    if p.degree < 2:
        return MvPolynomial.zero(p.num_vars, p.dim, 0)
    out = np.zeros((len(monomials(p.num_vars, p.degree - 2)), 1 << p.dim))
    for j in range(p.num_vars):
        out += derivative_matrix(p.num_vars, p.degree - 1, j) @ derivative_matrix(p.num_vars, p.degree, j) @ p.coeffs
    return MvPolynomial(p.num_vars, p.dim, p.degree - 2, out)


def scalar_poly_multiply(p: MvPolynomial, q_coeffs: np.ndarray, q_degree: int) -> MvPolynomial:
    """p times a real homogeneous polynomial given by its monomial coefficients."""
    src = monomials(p.num_vars, p.degree)
    dst = monomial_index(p.num_vars, p.degree + q_degree)
    out = np.zeros((len(dst), 1 << p.dim))
    for beta, qc in zip(monomials(p.num_vars, q_degree), q_coeffs):
        if qc == 0.0:
            continue
        rows = [dst[tuple(a + b for a, b in zip(alpha, beta))] for alpha in src]
        np.add.at(out, rows, qc * p.coeffs)
    return MvPolynomial(p.num_vars, p.dim, p.degree + q_degree, out)


def poly_product(p: MvPolynomial, q: MvPolynomial) -> MvPolynomial:
    """Pointwise Clifford product p(x) q(x)."""
    if (p.num_vars, p.dim) != (q.num_vars, q.dim):
        raise ValueError("polynomials live in different spaces")
    dst = monomial_index(p.num_vars, p.degree + q.degree)
    q_monos = monomials(q.num_vars, q.degree)
    out = np.zeros((len(dst), 1 << p.dim))
    for alpha, coef in zip(monomials(p.num_vars, p.degree), p.coeffs):
        if not np.any(coef):
            continue
        rows = [dst[tuple(a + b for a, b in zip(alpha, beta))] for beta in q_monos]
        np.add.at(out, rows, gp_arrays(coef, q.coeffs, p.dim))
    return MvPolynomial(p.num_vars, p.dim, p.degree + q.degree, out)


@lru_cache(maxsize=None)
def radius_power_coeffs(num_vars: int, power: int) -> np.ndarray:
    """Monomial coefficients of (x_1^2 + ... + x_n^2)^power."""
    index = monomial_index(num_vars, 2 * power)
    out = np.zeros(len(index))
    for alpha in monomials(num_vars, power):
        coef = math.factorial(power)
        for a in alpha:
            coef //= math.factorial(a)
        out[index[tuple(2 * a for a in alpha)]] += coef
    out.setflags(write=False)
    return out


def dirac_matrix(num_vars: int, dim: int, degree: int) -> np.ndarray:
    """Matrix of D on flattened degree-``degree`` coefficients."""
    rows = len(monomials(num_vars, degree - 1)) * (1 << dim)
    cols = len(monomials(num_vars, degree)) * (1 << dim)
    mat = np.zeros((rows, cols))
    for j in range(num_vars):
        mat += np.kron(derivative_matrix(num_vars, degree, j), generator_matrix(dim, j))
    return mat


def scalar_laplacian_matrix(num_vars: int, degree: int) -> np.ndarray:
    mat = np.zeros((len(monomials(num_vars, degree - 2)), len(monomials(num_vars, degree))))
    for j in range(num_vars):
        mat += derivative_matrix(num_vars, degree - 1, j) @ derivative_matrix(num_vars, degree, j)
    return mat


@dataclass(frozen=True, eq=False)
class PolySubspace:
    degree: int
    basis: tuple[MvPolynomial, ...]
    label: str

    @property
    def dim(self) -> int:
        return len(self.basis)

    def tensor(self) -> np.ndarray:
        """(dim, #monomials, 2^N) stack of basis coefficients."""
        return np.stack([b.coeffs for b in self.basis])

    def combine(self, weights: np.ndarray) -> MvPolynomial:
        weights = np.asarray(weights, dtype=float)
        b0 = self.basis[0]
        return MvPolynomial(b0.num_vars, b0.dim, self.degree, np.tensordot(weights, self.tensor(), axes=1))

    def gram(self) -> np.ndarray:
        flat = self.tensor().reshape(self.dim, -1)
        return flat @ flat.T


def harmonic_dimension(N: int, m: int) -> int:
    scalar = math.comb(m + N - 1, N - 1) - (math.comb(m + N - 3, N - 1) if m >= 2 else 0)
    return (1 << N) * scalar


def monogenic_dimension(N: int, m: int) -> int:
    """From dim H_j = dim P_j + dim P_{j-1}."""
    return sum((-1) ** (m - j) * harmonic_dimension(N, j) for j in range(m + 1))


@lru_cache(maxsize=None)
def harmonic_basis(N: int, m: int) -> PolySubspace:
    if N < 2 or m < 0:
        raise ValueError("harmonic_basis needs N >= 2 and m >= 0")
    count = len(monomials(N, m))
    if m < 2:
        scalar_null = np.eye(count)
    else:
        scalar_null = scipy.linalg.null_space(scalar_laplacian_matrix(N, m), rcond=NULL_RCOND)
    size = 1 << N
    basis = []
    for v in scalar_null.T:
        for blade in range(size):
            coeffs = np.zeros((count, size))
            coeffs[:, blade] = v
            basis.append(MvPolynomial(N, N, m, coeffs))
    return PolySubspace(m, tuple(basis), "harmonic")


@lru_cache(maxsize=None)
def monogenic_basis(N: int, m: int) -> PolySubspace:
    if N < 2 or m < 0:
        raise ValueError("monogenic_basis needs N >= 2 and m >= 0")
    count = len(monomials(N, m))
    size = 1 << N
    if m == 0:
        null = np.eye(size)
    else:
        null = scipy.linalg.null_space(dirac_matrix(N, N, m), rcond=NULL_RCOND)
    basis = tuple(MvPolynomial(N, N, m, v.reshape(count, size)) for v in null.T)
    return PolySubspace(m, basis, "monogenic")


def fischer_split(h: MvPolynomial, tol: float = 1e-10) -> tuple[MvPolynomial, MvPolynomial]:
    """
    h = p + x q with D p = 0 (degree m) and D q = 0 (degree m - 1).
    """
    m = h.degree
    if m < 1:
        raise NotHarmonicError("fischer_split needs degree >= 1")
    scale = max(h.norm(), 1.0)
    if laplacian_apply(h).norm() > tol * scale:
        raise NotHarmonicError("input is not harmonic")
    P = monogenic_basis(h.num_vars, m)
    Q = monogenic_basis(h.num_vars, m - 1)
    xq = [vector_multiply(b) for b in Q.basis]
    columns = np.column_stack([b.flat() for b in P.basis] + [b.flat() for b in xq])
    sol, *_ = scipy.linalg.lstsq(columns, h.flat())
    if np.linalg.norm(columns @ sol - h.flat()) > tol * scale:
        raise NotHarmonicError("harmonic polynomial does not split over P_m + x P_(m-1)")
    p = P.combine(sol[: P.dim])
    q = Q.combine(sol[P.dim :])
    return p, q


@dataclass(frozen=True, eq=False)
class KelvinImage:
    """x -> G(x) p(x^{-1}) with G(x) = x / ||x||^N, kept as (vector, power, polynomial)."""

    p: MvPolynomial

    @property
    def degree(self) -> int:
        return -(self.p.num_vars - 1) - self.p.degree

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        r2 = np.sum(points**2, axis=-1)
        if np.any(r2 == 0.0):
            raise SingularityError("Kelvin image is singular at the origin")
        N = self.p.num_vars
        inv = -points / r2[:, None]
        values = self.p.evaluate(inv)
        g = embed_vectors(points, self.p.dim) / (r2[:, None] ** (N / 2))
        return gp_arrays(g, values, self.p.dim)

    def sphere_values(self, w: np.ndarray) -> np.ndarray:
        """On ||w|| = 1: w p(-w) = (-1)^m w p(w)."""
        w = np.atleast_2d(np.asarray(w, dtype=float))
        return gp_arrays(embed_vectors(w, self.p.dim), self.p.evaluate(-w), self.p.dim)


def kelvin_invert(p: MvPolynomial, tol: float = 1e-10) -> KelvinImage:
    if dirac_apply(p).norm() > tol * max(p.norm(), 1.0):
        raise NotMonogenicError("Kelvin inversion needs D p = 0")
    return KelvinImage(p)
