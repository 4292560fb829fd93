"""
Spectral calculus on S^n.

A band-limited field is sum_m p_m + w q_m with p_m, q_m in P_m (degree-m
monogenics in n+1 variables over Cl_{n+1}). Every operator here preserves each
two-dimensional sector {p, w p}, so it acts through a 2x2 block per degree m on
the coefficient pair (a_m, b_m). With s = m + n/2:

    Gamma_w        diag(m, -(n+m))
    w.             [[0, -1], [1, 0]]
    D_S - alpha w  [[0, s+alpha], [s-alpha, 0]]
    D_alpha        [[0, n+m-alpha], [m+alpha, 0]]

Quadrature is used only for norms and for kernel convolutions.
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from src.clifford_core import Multivector, Signature, embed_vectors, gp_arrays
from src.config_loader import DEFAULT_SEED
from src.errors import KernelDegenerateError, NotInvertibleError, QuadratureError, SingularityError
from src.logger import write_log
from src.polyspace import monogenic_basis, monogenic_dimension, monomial_values, monomials
from src.quadrature import QuadratureRule, omega, polar_rule, quadrature_rule, sphere_monomial_integral
from src.report import Check, ResultRow

SINGULAR_DISTANCE = 1e-12


@lru_cache(maxsize=None)
def basis_tensor(n: int, m: int) -> np.ndarray:
    tensor = monogenic_basis(n + 1, m).tensor()
    tensor.setflags(write=False)
    return tensor


@dataclass(frozen=True, eq=False)
class SphericalField:
    """sum_m p_m + w q_m; ``components`` holds (m, a_m, b_m) sorted by m."""

    n: int
    components: tuple = ()

    def __post_init__(self):
        cleaned = []
        seen = set()
        for m, a, b in sorted(self.components, key=lambda c: c[0]):
            if m in seen:
                raise ValueError(f"degree {m} appears twice")
            seen.add(m)
            size = monogenic_dimension(self.n + 1, m)
            a = np.array(a, dtype=float)
            b = np.array(b, dtype=float)
            if a.shape != (size,) or b.shape != (size,):
                raise ValueError(f"degree {m} needs {size} coefficients per part")
            a.setflags(write=False)
            b.setflags(write=False)
            cleaned.append((int(m), a, b))
        object.__setattr__(self, "components", tuple(cleaned))

    @classmethod
    def zero(cls, n: int) -> "SphericalField":
        return cls(n, ())

    @property
    def dim(self) -> int:
        """Clifford dimension n + 1."""
        return self.n + 1

    @property
    def band_limit(self) -> int:
        return max((m for m, _, _ in self.components), default=0)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(m for m, _, _ in self.components)

    def component(self, m: int) -> tuple[np.ndarray, np.ndarray]:
        for deg, a, b in self.components:
            if deg == m:
                return a, b
        size = monogenic_dimension(self.n + 1, m)
        return np.zeros(size), np.zeros(size)

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """(P, n+1) unit vectors -> (P, 2^{n+1}) values."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        N = self.dim
        out = np.zeros((points.shape[0], 1 << N))
        if not self.components:
            return out
        wv = embed_vectors(points, N)
        for m, a, b in self.components:
            tensor = basis_tensor(self.n, m)
            mono = monomial_values(points, m)
            out += mono @ np.tensordot(a, tensor, axes=1)
            out += gp_arrays(wv, mono @ np.tensordot(b, tensor, axes=1), N)
        return out

    def map_blocks(self, block_of) -> "SphericalField":
        """Apply ``block_of(m)`` (2x2) to every (a_m, b_m)."""
        out = []
        for m, a, b in self.components:
            mat = block_of(m)
            out.append((m, mat[0, 0] * a + mat[0, 1] * b, mat[1, 0] * a + mat[1, 1] * b))
        return SphericalField(self.n, tuple(out))

    def _combine(self, other: "SphericalField", sign: float) -> "SphericalField":
        if self.n != other.n:
            raise ValueError(f"fields on S^{self.n} and S^{other.n}")
        degrees = sorted(set(self.degrees) | set(other.degrees))
        comps = []
        for m in degrees:
            a1, b1 = self.component(m)
            a2, b2 = other.component(m)
            comps.append((m, a1 + sign * a2, b1 + sign * b2))
        return SphericalField(self.n, tuple(comps))

    def __add__(self, other: "SphericalField") -> "SphericalField":
        return self._combine(other, 1.0)

    def __sub__(self, other: "SphericalField") -> "SphericalField":
        return self._combine(other, -1.0)

    def scale(self, factor: float) -> "SphericalField":
        return SphericalField(self.n, tuple((m, factor * a, factor * b) for m, a, b in self.components))

    def coefficient_vector(self) -> np.ndarray:
        return np.concatenate([np.concatenate([a, b]) for _, a, b in self.components] or [np.zeros(0)])


# --- blocks ---------------------------------------------------------------

def _s(n: int, m: int) -> float:
    return m + n / 2.0


def gamma_block(n: int, m: int) -> np.ndarray:
    return np.diag([float(m), -float(n + m)])


def w_block() -> np.ndarray:
    return np.array([[0.0, -1.0], [1.0, 0.0]])


def shifted_ds_block(n: int, m: int, alpha: float) -> np.ndarray:
    """Block of D_S - alpha w."""
    s = _s(n, m)
    return np.array([[0.0, s + alpha], [s - alpha, 0.0]])


def d_alpha_block(n: int, m: int, alpha: float) -> np.ndarray:
    """Block of D_alpha = w(Gamma_w + alpha)."""
    return np.array([[0.0, n + m - alpha], [m + alpha, 0.0]])


def laplace_beltrami_block(n: int, m: int) -> np.ndarray:
    """Delta_w = ((1 - n) - Gamma_w) Gamma_w."""
    return np.diag([float((1 - n - m) * m), -float((1 + m) * (n + m))])


def dsk_factors(k: int) -> tuple[int, ...]:
    """Shifts alpha_i of D_S^(k) = (D_S - alpha_0 w)(D_S - alpha_1 w)...; 0, 1, 1, 2, 2, ..."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return tuple((i + 1) // 2 for i in range(k))


def dsk_block(n: int, m: int, k: int) -> np.ndarray:
    mat = np.eye(2)
    for alpha in dsk_factors(k):
        mat = mat @ shifted_ds_block(n, m, alpha)
    return mat


@dataclass(frozen=True, eq=False)
class SpectralBlock:
    m: int
    s: float
    matrix: np.ndarray = field(repr=False)

    def eigenvalues(self) -> tuple[float, float]:
        return block_eigenvalues(self.matrix)


def spectral_block(n: int, m: int, k: int) -> SpectralBlock:
    return SpectralBlock(m, _s(n, m), dsk_block(n, m, k))


def block_eigenvalues(mat: np.ndarray) -> tuple[float, float]:
    """(larger, smaller) eigenvalue of a symmetric 2x2 block."""
    a, b, c, d = mat[0, 0], mat[0, 1], mat[1, 0], mat[1, 1]
    if b == 0.0 and c == 0.0:
        vals = (a, d)
    elif a == 0.0 and d == 0.0 and b == c:
        vals = (abs(b), -abs(b))
    else:
        vals = tuple(np.linalg.eigvalsh(0.5 * (mat + mat.T)))
    return float(max(vals)), float(min(vals))


# --- operators ------------------------------------------------------------

def gamma_w_apply(f: SphericalField) -> SphericalField:
    return f.map_blocks(lambda m: gamma_block(f.n, m))


def w_multiply(f: SphericalField) -> SphericalField:
    return f.map_blocks(lambda m: w_block())


def ds_apply(f: SphericalField) -> SphericalField:
    return dsk_apply(f, 1)


def d_alpha_apply(f: SphericalField, alpha: float) -> SphericalField:
    return f.map_blocks(lambda m: d_alpha_block(f.n, m, alpha))


def shifted_ds_apply(f: SphericalField, alpha: float) -> SphericalField:
    """D_S - alpha w."""
    return f.map_blocks(lambda m: shifted_ds_block(f.n, m, alpha))


def delta_s_apply(f: SphericalField) -> SphericalField:
    """Conformal Laplacian D_S(D_S - w)."""
    return dsk_apply(f, 2)


def paenitz_apply(f: SphericalField) -> SphericalField:
    return dsk_apply(f, 4)


def dsk_apply(f: SphericalField, k: int) -> SphericalField:
    dsk_factors(k)
    return f.map_blocks(lambda m: dsk_block(f.n, m, k))


def laplace_beltrami_apply(f: SphericalField) -> SphericalField:
    return f.map_blocks(lambda m: laplace_beltrami_block(f.n, m))


# --- spectra --------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumRow:
    m: int
    lambda_plus: float
    lambda_minus: float
    multiplicity: int


@dataclass(frozen=True)
class SpectrumTable:
    operator: str
    n: int
    rows: tuple[SpectrumRow, ...]

    def to_rows(self) -> list[dict]:
        return [
            {"m": r.m, "lambda_plus": r.lambda_plus, "lambda_minus": r.lambda_minus, "multiplicity": r.multiplicity}
            for r in self.rows
        ]

    def smallest_magnitude(self) -> float:
        return min(min(abs(r.lambda_plus), abs(r.lambda_minus)) for r in self.rows)


def default_scan(k: int, n: int) -> int:
    return n + k + 2


def spectrum_table(k: int, n: int, m_max: int) -> SpectrumTable:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if m_max < 0:
        raise ValueError(f"m_max must be >= 0, got {m_max}")
    rows = []
    for m in range(m_max + 1):
        plus, minus = block_eigenvalues(dsk_block(n, m, k))
        rows.append(SpectrumRow(m, plus, minus, monogenic_dimension(n + 1, m)))
    return SpectrumTable(f"D_S^({k})", n, tuple(rows))


@lru_cache(maxsize=None)
def sharp_constant(k: int, n: int) -> float:
    """Smallest |eigenvalue| of D_S^(k) on L^2(S^n)."""
    return spectrum_table(k, n, default_scan(k, n)).smallest_magnitude()


def extremal_mode(k: int, n: int) -> tuple[int, float, np.ndarray]:
    """(m, eigenvalue, unit eigenvector in (a, b)) attaining sharp_constant; lowest m wins ties."""
    best = None
    for m in range(default_scan(k, n) + 1):
        vals, vecs = np.linalg.eigh(dsk_block(n, m, k))
        idx = int(np.argmin(np.abs(vals)))
        if best is None or abs(vals[idx]) < abs(best[1]) - 1e-12 * max(1.0, abs(best[1])):
            best = (m, float(vals[idx]), vecs[:, idx])
    return best


def _zero_mode_degree(k: int, n: int) -> int | None:
    for row in spectrum_table(k, n, default_scan(k, n)).rows:
        if row.lambda_plus == 0.0 or row.lambda_minus == 0.0:
            return row.m
    return None


def spectral_inverse_apply(f: SphericalField, k: int) -> SphericalField:
    """C_k * f: blockwise inverse of D_S^(k)."""
    if sharp_constant(k, f.n) == 0.0:
        raise NotInvertibleError(f.n, k, _zero_mode_degree(k, f.n))
    return f.map_blocks(lambda m: np.linalg.inv(dsk_block(f.n, m, k)))


def spectral_inverse_norm(k: int, n: int, m_max: int = 10) -> float:
    """Operator norm of the inverse restricted to degrees <= m_max; equals 1 / sharp_constant."""
    if sharp_constant(k, n) == 0.0:
        raise NotInvertibleError(n, k, _zero_mode_degree(k, n))
    worst = 0.0
    for m in range(m_max + 1):
        inv = np.linalg.inv(dsk_block(n, m, k))
        worst = max(worst, float(np.linalg.norm(inv, 2)))
    return worst


# --- invertibility and zero modes ----------------------------------------

def in_gamma_spectrum(x: float, n: int, tol: float = 1e-12) -> bool:
    """x in {0, 1, 2, ...} U {-n, -n-1, ...}."""
    r = round(x)
    if abs(x - r) > tol:
        return False
    return r >= 0 or r <= -n


def d_alpha_invertible(alpha: float, n: int) -> bool:
    return not in_gamma_spectrum(-alpha, n)


def laplacian_ab_invertible(alpha: float, beta: float, n: int) -> bool:
    """(Gamma_w + alpha)(Gamma_w + beta); predicate only."""
    return d_alpha_invertible(alpha, n) and d_alpha_invertible(beta, n)


@dataclass(frozen=True)
class ZeroMode:
    m: int
    branch: str
    multiplicity: int


def shifted_ds_zero_modes(alpha: float, n: int, m_max: int, tol: float = 1e-12) -> list[ZeroMode]:
    """
    Kernel of D_S + alpha w by degree. It is nonzero iff alpha = +-(m + n/2):
    alpha = s kills the w P_m sector, alpha = -s kills P_m.
    """
    modes = []
    for m in range(m_max + 1):
        s = _s(n, m)
        if abs(alpha - s) <= tol:
            modes.append(ZeroMode(m, "wP", monogenic_dimension(n + 1, m)))
        elif abs(alpha + s) <= tol:
            modes.append(ZeroMode(m, "P", monogenic_dimension(n + 1, m)))
    return modes


# --- fields ---------------------------------------------------------------

def random_field(n: int, band_limit: int, rng: np.random.Generator) -> SphericalField:
    comps = []
    for m in range(band_limit + 1):
        size = monogenic_dimension(n + 1, m)
        comps.append((m, rng.uniform(-1.0, 1.0, size), rng.uniform(-1.0, 1.0, size)))
    return SphericalField(n, tuple(comps))


def eigenfield(n: int, m: int, vector: np.ndarray, basis_index: int = 0) -> SphericalField:
    """vector[0] p + vector[1] w p for one basis monogenic p of degree m."""
    size = monogenic_dimension(n + 1, m)
    a = np.zeros(size)
    b = np.zeros(size)
    a[basis_index] = vector[0]
    b[basis_index] = vector[1]
    return SphericalField(n, ((m, a, b),))


def extremal_field(k: int, n: int) -> SphericalField:
    m, _, vec = extremal_mode(k, n)
    return eigenfield(n, m, vec)


# --- norms ----------------------------------------------------------------

def default_rule(n: int, band_limit: int) -> QuadratureRule:
    return quadrature_rule(n, 2 * (band_limit + 1))


def l2_inner(f: SphericalField, g: SphericalField, rule: QuadratureRule) -> float:
    """integral of Sc(conj(f) g) over S^n."""
    if f.n != g.n or rule.n != f.n:
        raise QuadratureError(f"fields on S^{f.n}, S^{g.n} and rule on S^{rule.n}")
    band = max(f.band_limit, g.band_limit)
    if 2 * (band + 1) > rule.d_exact:
        raise QuadratureError(
            f"band limit {band} needs exactness {2 * (band + 1)}, rule has {rule.d_exact}"
        )
    values = np.sum(f.evaluate(rule.nodes) * g.evaluate(rule.nodes), axis=-1)
    return float(rule.integrate(values))


def l2_norm(f: SphericalField, rule: QuadratureRule) -> float:
    return math.sqrt(max(l2_inner(f, f, rule), 0.0))


@lru_cache(maxsize=None)
def _monomial_moment_matrix(num_vars: int, m: int) -> np.ndarray:
    monos = monomials(num_vars, m)
    mat = np.array(
        [[sphere_monomial_integral(tuple(x + y for x, y in zip(a, b))) for b in monos] for a in monos]
    )
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=None)
def gram_matrix(n: int, m: int) -> np.ndarray:
    """Exact L^2(S^n) Gram matrix of monogenic_basis(n+1, m)."""
    tensor = basis_tensor(n, m)
    gram = np.einsum("iab,ac,jcb->ij", tensor, _monomial_moment_matrix(n + 1, m), tensor)
    gram.setflags(write=False)
    return gram


def coefficient_norm(f: SphericalField) -> float:
    """L^2 norm from the coefficients alone; P_m, w P_m and distinct degrees are orthogonal."""
    total = 0.0
    for m, a, b in f.components:
        g = gram_matrix(f.n, m)
        total += float(a @ g @ a + b @ g @ b)
    return math.sqrt(max(total, 0.0))


# --- kernels --------------------------------------------------------------

def c1_kernel_values(w: np.ndarray, y: np.ndarray) -> np.ndarray:
    """C_1(w, y) = (y - w) / (omega_n ||y - w||^n) as (P, 2^{n+1}) vector coefficients."""
    w = np.atleast_2d(np.asarray(w, dtype=float))
    y = np.asarray(y, dtype=float)
    n = y.shape[0] - 1
    diff = y[None, :] - w
    dist = np.linalg.norm(diff, axis=1)
    if np.any(dist < SINGULAR_DISTANCE):
        raise SingularityError("C_1(w, y) is singular at w = y")
    return embed_vectors(diff / (omega(n) * dist[:, None] ** n), n + 1)


def c1_kernel_eval(w: np.ndarray, y: np.ndarray) -> Multivector:
    y = np.asarray(y, dtype=float)
    return Multivector(Signature(y.shape[0]), c1_kernel_values(w, y)[0])


def c2_kernel_values(w: np.ndarray, y: np.ndarray) -> np.ndarray:
    """C_2(w, y) = 1 / ((n - 2) omega_n ||w - y||^{n-2}), shape (P,)."""
    w = np.atleast_2d(np.asarray(w, dtype=float))
    y = np.asarray(y, dtype=float)
    n = y.shape[0] - 1
    if n < 3:
        raise KernelDegenerateError(f"C_2 needs n >= 3, got n={n}")
    dist = np.linalg.norm(w - y[None, :], axis=1)
    if np.any(dist < SINGULAR_DISTANCE):
        raise SingularityError("C_2(w, y) is singular at w = y")
    return 1.0 / ((n - 2) * omega(n) * dist ** (n - 2))


def c2_kernel_eval(w: np.ndarray, y: np.ndarray) -> float:
    return float(c2_kernel_values(w, y)[0])


def c1_convolve(
    f: SphericalField,
    y_points: np.ndarray,
    theta_nodes: int = 48,
    angular_degree: int = 16,
) -> np.ndarray:
    """
    y -> integral of C_1(w, y) f(w) dsigma(w), one polar rule per y.
    Returns (Y, 2^{n+1}).
    """
    y_points = np.atleast_2d(np.asarray(y_points, dtype=float))
    N = f.dim
    out = np.zeros((y_points.shape[0], 1 << N))
    for i, y in enumerate(y_points):
        rule = polar_rule(y, theta_nodes, angular_degree)
        values = gp_arrays(c1_kernel_values(rule.nodes, y), f.evaluate(rule.nodes), N)
        out[i] = rule.integrate(values)
    return out


def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    x = rng.standard_normal((count, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def c2_identity_residual(n: int, samples: int, rng: np.random.Generator, h: float = 1e-5) -> float:
    """
    Max relative residual of D_S C_2(., y) = w C_2 - C_1(w, y), with D_S acting
    on the degree-0 extension F(x) = C_2(x/|x|, y) as D_S f = -D F + (n/2) w f.
    The extension convention is a choice, so callers label the result
    convention-dependent.
    """
    N = n + 1
    worst = 0.0
    for _ in range(samples):
        y = random_unit_vectors(rng, 1, N)[0]
        while True:
            w = random_unit_vectors(rng, 1, N)[0]
            if 0.5 <= np.linalg.norm(w - y) <= 1.8:
                break

        def extension(x):
            return c2_kernel_values(x / np.linalg.norm(x), y)[0]

        grad = np.array(
            [(extension(w + h * e) - extension(w - h * e)) / (2.0 * h) for e in np.eye(N)]
        )
        c2 = c2_kernel_values(w, y)[0]
        wv = embed_vectors(w, N)
        lhs = -embed_vectors(grad, N) + (n / 2.0) * c2 * wv
        rhs = c2 * wv - c1_kernel_values(w, y)[0]
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-300)))
    return worst


# --- verification ---------------------------------------------------------

def _inequality_name(k: int) -> str:
    return {1: "D_S lower bound", 2: "conformal Laplacian lower bound"}.get(k, f"D_S^({k}) lower bound")


def verify_sphere_inequality(
    k: int,
    n: int,
    trial_count: int,
    band_limit: int,
    rule: QuadratureRule | None = None,
    *,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    tol_one_sided: float = 1e-9,
    tol_sharp: float = 1e-9,
    config: dict | None = None,
) -> ResultRow:
    """
    ||D_S^(k) phi|| / ||phi|| over random band-limited phi must stay above
    sharp_constant; the extremal eigenfield must attain it.
    """
    started = time.perf_counter()
    constant = sharp_constant(k, n)
    if rule is None:
        rule = default_rule(n, band_limit)
    write_log(f"sphere suite start | n={n} k={k} trials={trial_count} band={band_limit}", config=config)

    def trial(index: int) -> float:
        rng = np.random.default_rng([seed, index])
        phi = random_field(n, band_limit, rng)
        return l2_norm(dsk_apply(phi, k), rule) / l2_norm(phi, rule)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        ratios = list(pool.map(trial, range(trial_count)))
    min_ratio = min(ratios) if ratios else float("nan")

    m_ext, _, _ = extremal_mode(k, n)
    phi_ext = extremal_field(k, n)
    ext_rule = rule if rule.d_exact >= 2 * (m_ext + 1) else default_rule(n, m_ext)
    ext_ratio = l2_norm(dsk_apply(phi_ext, k), ext_rule) / l2_norm(phi_ext, ext_rule)
    gap = abs(ext_ratio - constant)

    trivial = constant == 0.0
    checks = [
        Check("one_sided", min_ratio, ">=", constant * (1.0 - tol_one_sided)),
        Check("sharpness", gap, "<=", tol_sharp * max(1.0, constant)),
    ]
    measured = {
        "min_ratio": min_ratio,
        "extremal_ratio": ext_ratio,
        "extremal_gap": gap,
        "extremal_degree": m_ext,
        "trials": trial_count,
        "band_limit": band_limit,
    }
    if not trivial:
        inverse_norm = spectral_inverse_norm(k, n, max(band_limit, default_scan(k, n)))
        measured["inverse_norm"] = inverse_norm
        checks.append(Check("inverse_norm", abs(inverse_norm * constant - 1.0), "<=", tol_sharp))
    row = ResultRow(
        suite="sphere",
        name=_inequality_name(k),
        n=n,
        k=k,
        constant=constant,
        measured=measured,
        checks=tuple(checks),
        status="trivial" if trivial else "checked",
        note="constant is zero: D_S^(k) has a kernel on this sphere" if trivial else "",
        wall_time=time.perf_counter() - started,
    )
    write_log(f"sphere suite row | n={n} k={k} pass={row.passed} min_ratio={min_ratio:.12g}", config=config)
    return row


def verify_c1_inverse(
    n: int,
    samples: int = 20,
    band_limit: int = 3,
    *,
    seed: int = DEFAULT_SEED,
    tol: float = 1e-5,
    theta_nodes: int = 48,
    angular_degree: int = 16,
    config: dict | None = None,
) -> ResultRow:
    """
    The Cauchy kernel C_1 convolved with phi must agree with the blockwise
    inverse of D_S at random points of S^n.
    """
    started = time.perf_counter()
    rng = np.random.default_rng([seed, n, 1])
    phi = random_field(n, band_limit, rng)
    y = random_unit_vectors(rng, samples, n + 1)
    reference = spectral_inverse_apply(phi, 1).evaluate(y)
    values = c1_convolve(phi, y, theta_nodes, angular_degree)
    error = float(np.linalg.norm(values - reference) / max(np.linalg.norm(reference), 1e-300))
    row = ResultRow(
        suite="sphere",
        name="C_1 convolution inverts D_S",
        n=n,
        k=1,
        constant=sharp_constant(1, n),
        measured={"relative_error": error, "samples": samples, "band_limit": band_limit},
        checks=(Check("c1_inverse", error, "<=", tol),),
        wall_time=time.perf_counter() - started,
    )
    write_log(f"sphere suite row | C_1 inverse n={n} error={error:.3g}", config=config)
    return row
