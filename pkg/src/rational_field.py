"""
Exact test functions on R^n: finite sums P(x) (1 + |x|^2)^{-s/2} with P a
homogeneous Cl_{n+1}-valued polynomial in n variables and s an integer.

The class is closed under the Euclidean Dirac operator D = sum_{j<=n} e_j d_j:

    D[P (1+r^2)^{-s/2}] = (DP)(1+r^2)^{-s/2} - s (xP)(1+r^2)^{-(s+2)/2}

Weighted L^2 integrals are computed in tan-substitution form, x = tan(theta) u,
where every term becomes sin^a(theta) cos^b(theta) times a polynomial in u.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from src.errors import IntegrabilityError
from src.polyspace import (
    MvPolynomial,
    dirac_apply,
    poly_product,
    radius_power_coeffs,
    scalar_poly_multiply,
    vector_multiply,
)
from src.quadrature import EuclideanRule, euclidean_rule

PRUNE_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class RationalField:
    """``terms`` maps (degree, s) to the polynomial P of that degree."""

    n: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (deg, s), poly in self.terms.items():
            if poly.num_vars != self.n or poly.dim != self.n + 1 or poly.degree != deg:
                raise ValueError(f"term ({deg}, {s}) does not fit R^{self.n} over Cl_{self.n + 1}")
            if poly.is_zero():
                continue
            clean[(int(deg), int(s))] = poly
        object.__setattr__(self, "terms", clean)

    @property
    def dim(self) -> int:
        return self.n + 1

    @classmethod
    def zero(cls, n: int) -> "RationalField":
        return cls(n, {})

    @classmethod
    def from_polynomial(cls, p: MvPolynomial, s: int = 0) -> "RationalField":
        return cls(p.num_vars, {(p.degree, s): p})

    @classmethod
    def radial(cls, n: int, s: int, value: float = 1.0) -> "RationalField":
        """value * (1 + r^2)^{-s/2}."""
        coeffs = np.zeros(1 << (n + 1))
        coeffs[0] = value
        return cls(n, {(0, s): MvPolynomial.constant(n, n + 1, coeffs)})

    def is_zero(self) -> bool:
        return not self.terms

    def _merge(self, pairs) -> "RationalField":
        out: dict = {}
        for key, poly in pairs:
            out[key] = out[key] + poly if key in out else poly
        return RationalField(self.n, out)

    def __add__(self, other: "RationalField") -> "RationalField":
        if self.n != other.n:
            raise ValueError(f"fields on R^{self.n} and R^{other.n}")
        return self._merge(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "RationalField") -> "RationalField":
        return self + other.scale(-1.0)

    def scale(self, factor: float) -> "RationalField":
        return RationalField(self.n, {key: p.scale(factor) for key, p in self.terms.items()})

    def left_mul(self, value: np.ndarray) -> "RationalField":
        return RationalField(self.n, {key: p.left_mul(value) for key, p in self.terms.items()})

    def shift(self, delta_s: int) -> "RationalField":
        """Multiply by (1 + r^2)^{-delta_s/2}."""
        return RationalField(self.n, {(deg, s + delta_s): p for (deg, s), p in self.terms.items()})

    def vector_multiply(self) -> "RationalField":
        """x f."""
        return RationalField(self.n, {(deg + 1, s): vector_multiply(p) for (deg, s), p in self.terms.items()})

    def __mul__(self, other: "RationalField") -> "RationalField":
        """Pointwise Clifford product."""
        if self.n != other.n:
            raise ValueError(f"fields on R^{self.n} and R^{other.n}")
        pairs = []
        for (d1, s1), p in self.terms.items():
            for (d2, s2), q in other.terms.items():
                pairs.append(((d1 + d2, s1 + s2), poly_product(p, q)))
        return self._merge(pairs)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """(P, n) -> (P, 2^{n+1})."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros((points.shape[0], 1 << self.dim))
        base = 1.0 + np.sum(points**2, axis=1)
        for (_, s), p in self.terms.items():
            out += p.evaluate(points) * (base ** (-s / 2.0))[:, None]
        return out

    def is_well_formed(self) -> bool:
        """Structural re-parse: every key matches its polynomial's degree and space."""
        return all(
            p.degree == deg and p.num_vars == self.n and p.dim == self.n + 1 and isinstance(s, int)
            for (deg, s), p in self.terms.items()
        )

    def top_degree(self) -> int:
        return max((deg for deg, _ in self.terms), default=0)


def d_apply_rational(f: RationalField) -> RationalField:
    pairs = []
    for (deg, s), p in f.terms.items():
        if deg >= 1:
            pairs.append(((deg - 1, s), dirac_apply(p)))
        if s != 0:
            pairs.append(((deg + 1, s + 2), vector_multiply(p).scale(-float(s))))
    return RationalField.zero(f.n)._merge(pairs)


def d_power_apply(f: RationalField, k: int) -> RationalField:
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    for _ in range(k):
        f = d_apply_rational(f)
    return f


# --- tan-substitution form ------------------------------------------------

@dataclass(frozen=True)
class ThetaTerm:
    """poly(u) sin^{sin_power}(theta) cos^{cos_power}(theta)."""

    poly: MvPolynomial
    sin_power: int
    cos_power: int


def theta_form(f: RationalField) -> list[ThetaTerm]:
    """
    Rewrite f over a common denominator per parity of s: for a group with
    largest s = S the numerator sum P (1+r^2)^{(S-s)/2} is expanded into
    homogeneous parts; parts below PRUNE_RTOL of the largest are dropped, so
    the surviving top degree gives the true decay r^{deg - S}.
    """
    out = []
    for parity in (0, 1):
        group = {key: p for key, p in f.terms.items() if key[1] % 2 == parity}
        if not group:
            continue
        top_s = max(s for _, s in group)
        numerator: dict[int, MvPolynomial] = {}
        for (deg, s), p in group.items():
            j = (top_s - s) // 2
            for ell in range(j + 1):
                part = scalar_poly_multiply(p, radius_power_coeffs(f.n, ell), 2 * ell).scale(math.comb(j, ell))
                key = deg + 2 * ell
                numerator[key] = numerator[key] + part if key in numerator else part
        largest = max((p.norm() for p in numerator.values()), default=0.0)
        for deg in sorted(numerator):
            poly = numerator[deg]
            if poly.norm() <= PRUNE_RTOL * largest:
                continue
            out.append(ThetaTerm(poly, deg, top_s - deg))
    return out


def decay_order(f: RationalField) -> int | None:
    """e with |f| ~ r^{-e} at infinity; None for the zero field."""
    terms = theta_form(f)
    if not terms:
        return None
    return min(t.cos_power for t in terms)


def _theta_values(terms: list[ThetaTerm], shift: int, rule: EuclideanRule, dim: int) -> np.ndarray:
    """(T, U, 2^dim) values divided by cos^shift."""
    sin = np.sin(rule.theta)
    cos = np.cos(rule.theta)
    out = np.zeros((len(rule.theta), rule.directions.size, 1 << dim))
    for t in terms:
        factor = sin**t.sin_power * cos ** (t.cos_power - shift)
        out += factor[:, None, None] * t.poly.evaluate(rule.directions.nodes)[None, :, :]
    return out


def weighted_inner(
    f: RationalField,
    g: RationalField,
    weight_exponent: int,
    radial_nodes: int = 200,
    angular_degree: int = 16,
) -> float:
    """integral over R^n of Sc(conj(f) g) (1 + r^2)^{weight_exponent}."""
    if f.n != g.n:
        raise ValueError(f"fields on R^{f.n} and R^{g.n}")
    n = f.n
    tf = theta_form(f)
    tg = theta_form(g)
    if not tf or not tg:
        return 0.0
    ef = min(t.cos_power for t in tf)
    eg = min(t.cos_power for t in tg)
    exponent = 2 * weight_exponent - ef - eg
    if exponent >= -n:
        raise IntegrabilityError(exponent, n)
    degree = max(t.sin_power for t in tf) + max(t.sin_power for t in tg)
    rule = euclidean_rule(n, radial_nodes, max(angular_degree, degree))
    F = _theta_values(tf, ef, rule, n + 1)
    G = _theta_values(tg, eg, rule, n + 1)
    angular = np.tensordot(np.sum(F * G, axis=-1), rule.directions.weights, axes=(1, 0))
    # dx = tan^{n-1} sec^2 dtheta du and (1 + r^2)^w = cos^{-2w}
    radial = np.sin(rule.theta) ** (n - 1) * np.cos(rule.theta) ** (-exponent - n - 1)
    return float(np.sum(rule.theta_weights * radial * angular))


def weighted_l2(f: RationalField, weight_exponent: int, **quadrature) -> float:
    """integral of |f|^2 (1 + r^2)^{weight_exponent} over R^n."""
    if f.is_zero():
        return 0.0
    return max(weighted_inner(f, f, weight_exponent, **quadrature), 0.0)


def weighted_norm(f: RationalField, weight_exponent: int, **quadrature) -> float:
    return math.sqrt(weighted_l2(f, weight_exponent, **quadrature))
