"""
Quadrature on S^n and R^n.

Sphere rules are built recursively: S^n is sliced by t = w_{n+1}, which carries
the Gauss-Jacobi weight (1 - t^2)^{(n-2)/2}, and each slice is a scaled S^{n-1}
rule. S^1 is a uniform trapezoid. Euclidean integrals use x = tan(theta) u with
Gauss-Legendre in theta and a sphere rule in u.
"""
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.special
from scipy.stats import special_ortho_group

from src.errors import QuadratureError

MIN_SPHERE_DIM = 1
MAX_SPHERE_DIM = 4
MAX_EXACTNESS = 40


def omega(n: int) -> float:
    """Surface area of the unit sphere in R^n."""
    return float(2.0 * np.pi ** (n / 2) / scipy.special.gamma(n / 2))


def sphere_area(n: int) -> float:
    """Surface area of S^n (the unit sphere in R^{n+1})."""
    return omega(n + 1)


def sphere_monomial_integral(alpha: tuple[int, ...]) -> float:
    """Exact integral of w^alpha over S^n, n = len(alpha) - 1."""
    if any(a % 2 for a in alpha):
        return 0.0
    beta = [(a + 1) / 2.0 for a in alpha]
    log_value = sum(math.lgamma(b) for b in beta) - math.lgamma(sum(beta))
    return 2.0 * math.exp(log_value)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    n: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    d_exact: int

    def __post_init__(self):
        for name in ("nodes", "weights"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def size(self) -> int:
        return len(self.weights)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Sum over the leading (node) axis."""
        return np.tensordot(self.weights, values, axes=(0, 0))

    def rotated(self, matrix: np.ndarray) -> "QuadratureRule":
        return QuadratureRule(self.n, self.nodes @ np.asarray(matrix).T, self.weights, self.d_exact)


def _sphere_rule(n: int, d_exact: int) -> tuple[np.ndarray, np.ndarray]:
    if n == 0:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if n == 1:
        count = d_exact + 1
        angles = 2.0 * np.pi * np.arange(count) / count
        nodes = np.column_stack([np.cos(angles), np.sin(angles)])
        return nodes, np.full(count, 2.0 * np.pi / count)
    alpha = (n - 2) / 2.0
    t, wt = scipy.special.roots_jacobi(d_exact // 2 + 1, alpha, alpha)
    sub_nodes, sub_weights = _sphere_rule(n - 1, d_exact)
    radius = np.sqrt(1.0 - t**2)
    nodes = np.concatenate(
        [np.column_stack([r * sub_nodes, np.full(len(sub_nodes), ti)]) for r, ti in zip(radius, t)]
    )
    weights = np.concatenate([wi * sub_weights for wi in wt])
    return nodes, weights


@lru_cache(maxsize=64)
def sphere_rule(n: int, d_exact: int) -> QuadratureRule:
    """Unchecked rule for any n >= 0; used for angular factors."""
    nodes, weights = _sphere_rule(n, d_exact)
    return QuadratureRule(n, nodes, weights, d_exact)


@lru_cache(maxsize=64)
def quadrature_rule(n: int, d_exact: int, rotation_seed: int | None = None) -> QuadratureRule:
    """
    Product rule on S^n exact for polynomials of degree <= d_exact.

    With ``rotation_seed`` the nodes are turned by a fixed random rotation,
    which keeps exactness and moves the poles off the coordinate axes.
    """
    if not MIN_SPHERE_DIM <= n <= MAX_SPHERE_DIM:
        raise QuadratureError(f"sphere dimension {n} not supported (1..{MAX_SPHERE_DIM})")
    if not 0 <= d_exact <= MAX_EXACTNESS:
        raise QuadratureError(f"exactness degree {d_exact} outside 0..{MAX_EXACTNESS}")
    rule = sphere_rule(n, d_exact)
    if rotation_seed is not None:
        rule = rule.rotated(special_ortho_group.rvs(n + 1, random_state=rotation_seed))
    return rule


def orthonormal_complement(y: np.ndarray) -> np.ndarray:
    """Columns spanning y^perp."""
    return scipy.linalg.null_space(np.asarray(y, dtype=float)[None, :])


def polar_rule(y: np.ndarray, theta_nodes: int = 48, angular_degree: int = 16) -> QuadratureRule:
    """
    Rule on S^n in geodesic polar coordinates about the unit vector y.
    w = cos(theta) y + sin(theta) v, dsigma = sin^{n-1}(theta) dtheta dv.
    No node sits at y, and integrands with a |w - y|^{1-n} singularity become
    smooth after the sin^{n-1} factor.
    """
    y = np.asarray(y, dtype=float)
    n = y.shape[0] - 1
    basis = orthonormal_complement(y)
    sub = sphere_rule(n - 1, angular_degree)
    x, wx = scipy.special.roots_legendre(theta_nodes)
    theta = 0.5 * np.pi * (x + 1.0)
    wtheta = 0.5 * np.pi * wx * np.sin(theta) ** (n - 1)
    v = sub.nodes @ basis.T
    nodes = np.cos(theta)[:, None, None] * y + np.sin(theta)[:, None, None] * v[None]
    weights = wtheta[:, None] * sub.weights[None, :]
    return QuadratureRule(n, nodes.reshape(-1, n + 1), weights.reshape(-1), d_exact=-1)


@dataclass(frozen=True, eq=False)
class EuclideanRule:
    """x = tan(theta) u on R^n, theta in (0, pi/2), u on S^{n-1}."""

    n: int
    theta: np.ndarray = field(repr=False)
    theta_weights: np.ndarray = field(repr=False)
    directions: QuadratureRule = field(repr=False)

    def points(self) -> np.ndarray:
        """(T, U, n) sample points."""
        r = np.tan(self.theta)
        return r[:, None, None] * self.directions.nodes[None, :, :]

    def radial_jacobian(self) -> np.ndarray:
        """tan^{n-1} sec^2 per theta node, times the theta weights."""
        return self.theta_weights * np.tan(self.theta) ** (self.n - 1) / np.cos(self.theta) ** 2

    def integrate_function(self, func) -> np.ndarray:
        """func maps (P, n) points to (P, ...) values."""
        pts = self.points()
        T, U = pts.shape[:2]
        values = np.asarray(func(pts.reshape(-1, self.n)))
        values = values.reshape((T, U) + values.shape[1:])
        inner = np.tensordot(values, self.directions.weights, axes=(1, 0))
        return np.tensordot(self.radial_jacobian(), inner, axes=(0, 0))


@lru_cache(maxsize=32)
def euclidean_rule(n: int, radial_nodes: int = 200, angular_degree: int = 16) -> EuclideanRule:
    if n < 1:
        raise QuadratureError(f"Euclidean dimension {n} not supported")
    x, wx = scipy.special.roots_legendre(radial_nodes)
    theta = 0.25 * np.pi * (x + 1.0)
    return EuclideanRule(n, theta, 0.25 * np.pi * wx, sphere_rule(n - 1, angular_degree))
