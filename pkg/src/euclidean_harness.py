"""
Euclidean side of the inequalities: weighted L^2 bounds for D^k on R^n, the
Riesz-type kernels G_k with DG_k = G_{k-1}, and their convolution bounds.

Differential checks run on the exact rational class (src/rational_field.py);
kernel checks truncate the input with a smooth cutoff and integrate in polar
coordinates about each evaluation point.
"""
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.special

from src.clifford_core import embed_vectors, gp_arrays
from src.config_loader import DEFAULT_SEED
from src.conformal import isometry_check, pullback
from src.errors import KernelDegenerateError, QuadratureError
from src.logger import write_log
from src.polyspace import MvPolynomial, monomials
from src.quadrature import euclidean_rule, omega, sphere_rule
from src.rational_field import (
    RationalField,
    d_apply_rational,
    d_power_apply,
    weighted_inner,
    weighted_l2,
)
from src.report import Check, ResultRow
from src.sphere_spectral import (
    coefficient_norm,
    default_rule,
    dsk_apply,
    extremal_field,
    l2_norm,
    random_field,
    sharp_constant,
    shifted_ds_zero_modes,
    spectral_inverse_apply,
)

__all__ = [
    "RationalField",
    "d_apply_rational",
    "d_power_apply",
    "weighted_inner",
    "weighted_l2",
    "euclidean_constant",
    "zero_mode_count",
    "kernel_constants",
    "RieszKernel",
    "convolve_gk",
    "random_rational",
    "verify_euclidean_inequality",
    "verify_kernel_inequality",
    "verify_kernel_transport",
    "verify_isometry",
]

SOURCES = ("random_rational", "pullback_random", "pullback_extremal")
KERNEL_DIMENSIONS = (2, 3)
FD_STEP = 1e-5


def euclidean_constant(k: int, n: int) -> float:
    """2^k times the sphere constant: n for k = 1, n(n - 2) for k = 2."""
    return 2.0**k * sharp_constant(k, n)


def zero_mode_count(alpha: float, n: int, m_max: int) -> int:
    """Solutions of Du + alpha/(1 + |x|^2) u = 0 carried over from the sphere kernel of D_S + alpha w."""
    return sum(mode.multiplicity for mode in shifted_ds_zero_modes(alpha, n, m_max))


# --- kernels --------------------------------------------------------------

@dataclass(frozen=True)
class RieszKernel:
    """odd k: (C/omega_n) z / |z|^{n+1-k};  even k: (C/omega_n) / |z|^{n-k}."""

    k: int
    n: int
    constant: float

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """(P, n) differences x - y -> (P, 2^{n+1})."""
        z = np.atleast_2d(np.asarray(z, dtype=float))
        r = np.linalg.norm(z, axis=1)
        scale = self.constant / omega(self.n)
        if self.k % 2:
            return embed_vectors(z * (scale * r ** (self.k - self.n - 1))[:, None], self.n + 1)
        out = np.zeros((z.shape[0], 1 << (self.n + 1)))
        out[:, 0] = scale * r ** (self.k - self.n)
        return out

    def radial_density(self, rho: np.ndarray, u: np.ndarray) -> np.ndarray:
        """G_k(rho u) rho^{n-1} on a (R,) x (U, n) grid, shape (R, U, 2^{n+1}); smooth at rho = 0."""
        scale = self.constant / omega(self.n) * rho ** (self.k - 1)
        if self.k % 2:
            return scale[:, None, None] * embed_vectors(u, self.n + 1)[None, :, :]
        out = np.zeros((len(rho), u.shape[0], 1 << (self.n + 1)))
        out[:, :, 0] = scale[:, None]
        return out


def _next_constant(previous: float, k: int, n: int) -> float:
    if k % 2 == 0:
        # D r^{k-n} = (k-n) r^{k-n-2} z
        if k == n:
            raise KernelDegenerateError(f"G_{k} degenerates on R^{n}: power |z|^0")
        return -previous / (n - k)
    # D(z f(r)) = -n f - r f'(r)
    return -previous / (k - 1)


def kernel_recursion_residual(
    upper: RieszKernel,
    lower: RieszKernel,
    rng: np.random.Generator,
    count: int = 100,
    h: float = FD_STEP,
) -> float:
    """Max relative |D G_k - G_{k-1}| by central differences, |x - y| in [0.5, 2]."""
    n = upper.n
    dim = n + 1
    worst = 0.0
    done = 0
    while done < count:
        x = rng.uniform(-2.0, 2.0, n)
        y = rng.uniform(-2.0, 2.0, n)
        z = x - y
        if not 0.5 <= np.linalg.norm(z) <= 2.0:
            continue
        done += 1
        dz = np.zeros(1 << dim)
        for j in range(n):
            step = np.zeros(n)
            step[j] = h
            diff = (upper.evaluate(z + step)[0] - upper.evaluate(z - step)[0]) / (2.0 * h)
            unit = np.zeros(1 << dim)
            unit[1 << j] = 1.0
            dz += gp_arrays(unit, diff, dim)
        target = lower.evaluate(z)[0]
        worst = max(worst, float(np.linalg.norm(dz - target) / np.linalg.norm(target)))
    return worst


def kernel_constants(
    n: int,
    k_max: int,
    rng: np.random.Generator | None = None,
    tol: float = 1e-6,
) -> list[float]:
    """
    [C_1, ..., C_{k_max}] from C_1 = 1 and DG_k = G_{k-1}; each step is
    certified by finite differences.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    rng = rng if rng is not None else np.random.default_rng([DEFAULT_SEED, n, k_max])
    constants = [1.0]
    for k in range(2, k_max + 1):
        constants.append(_next_constant(constants[-1], k, n))
        residual = kernel_recursion_residual(
            RieszKernel(k, n, constants[-1]), RieszKernel(k - 1, n, constants[-2]), rng
        )
        if residual > tol:
            raise KernelDegenerateError(f"DG_{k} = G_{k - 1} fails on R^{n}: residual {residual:.3e}")
    return constants


def riesz_kernel(k: int, n: int) -> RieszKernel:
    return RieszKernel(k, n, kernel_constants(n, k)[-1])


# --- convolution ----------------------------------------------------------

def smooth_cutoff(r: np.ndarray, radius: float) -> np.ndarray:
    """1 on [0, R/2], 0 beyond R, C^2 smootherstep in between."""
    t = np.clip((np.asarray(r, dtype=float) - radius / 2.0) / (radius / 2.0), 0.0, 1.0)
    return 1.0 - t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


def _graded_rule(rho_max: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    edges = np.concatenate([[0.0], np.geomspace(rho_max * 1e-4, rho_max, panels)])
    x, wx = scipy.special.roots_legendre(order)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * (x + 1.0) + a)
        weights.append(0.5 * (b - a) * wx)
    return np.concatenate(nodes), np.concatenate(weights)


def _convolve_once(
    h: RationalField,
    kernel: RieszKernel,
    y: np.ndarray,
    cutoff_radius: float,
    panels: int,
    order: int,
    angular_degree: int,
) -> np.ndarray:
    n = h.n
    rho, w_rho = _graded_rule(cutoff_radius + float(np.linalg.norm(y)), panels, order)
    directions = sphere_rule(n - 1, angular_degree)
    u = directions.nodes
    x = y[None, None, :] + rho[:, None, None] * u[None, :, :]
    flat = x.reshape(-1, n)
    values = h.evaluate(flat) * smooth_cutoff(np.linalg.norm(flat, axis=1), cutoff_radius)[:, None]
    values = values.reshape(len(rho), len(u), -1)
    density = kernel.radial_density(rho, u)
    integrand = gp_arrays(density, values, n + 1) if kernel.k % 2 else density[..., :1] * values
    return np.einsum("r,u,rus->s", w_rho, directions.weights, integrand)


def convolve_gk(
    h: RationalField,
    k: int,
    y_samples: np.ndarray,
    *,
    cutoff_radius: float = 50.0,
    panels: int = 6,
    order: int = 10,
    angular_degree: int = 16,
) -> tuple[np.ndarray, np.ndarray]:
    """
    (G_k * (chi h))(y) at each sample, chi the smooth cutoff at ``cutoff_radius``.
    Polar coordinates about y absorb the kernel singularity. Three refinement
    levels give the value (finest) and an error estimate per sample.
    """
    n = h.n
    if n not in KERNEL_DIMENSIONS:
        raise QuadratureError(f"kernel convolution supports n in {KERNEL_DIMENSIONS}, got {n}")
    kernel = riesz_kernel(k, n)
    y_samples = np.atleast_2d(np.asarray(y_samples, dtype=float))
    values = np.zeros((y_samples.shape[0], 1 << (n + 1)))
    errors = np.zeros(y_samples.shape[0])
    if h.is_zero():
        return values, errors
    for i, y in enumerate(y_samples):
        levels = [
            _convolve_once(h, kernel, y, cutoff_radius, panels * 2**lvl, order, angular_degree + 8 * lvl)
            for lvl in range(3)
        ]
        d1 = np.linalg.norm(levels[1] - levels[0])
        d2 = np.linalg.norm(levels[2] - levels[1])
        estimate = d2 * d2 / d1 if d1 > d2 else d2
        values[i] = levels[2]
        errors[i] = estimate + 1e-14 * np.linalg.norm(levels[2])
    return values, errors


# --- sources --------------------------------------------------------------

def random_rational(
    n: int,
    k: int,
    rng: np.random.Generator,
    max_degree: int = 2,
    num_terms: int = 2,
) -> RationalField:
    """Random sum of P (1 + r^2)^{-s/2} with s >= deg P + n + 2k + 2."""
    dim = n + 1
    terms = {}
    for _ in range(num_terms):
        deg = int(rng.integers(0, max_degree + 1))
        s = deg + n + 2 * k + 2 + int(rng.integers(0, 3))
        coeffs = rng.uniform(-1.0, 1.0, (len(monomials(n, deg)), 1 << dim))
        poly = MvPolynomial(n, dim, deg, coeffs)
        terms[(deg, s)] = terms[(deg, s)] + poly if (deg, s) in terms else poly
    return RationalField(n, terms)


def _source_fields(source: str, k: int, n: int, rng: np.random.Generator, band_limit: int):
    """(phi, psi or None) for one trial."""
    if source == "random_rational":
        return random_rational(n, k, rng), None
    if source == "pullback_random":
        psi = random_field(n, band_limit, rng)
        return pullback(psi, k), psi
    if source == "pullback_extremal":
        psi = extremal_field(k, n)
        return pullback(psi, k), psi
    raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")


def euclidean_ratio(phi: RationalField, k: int, **quadrature) -> float:
    """(int |D^k phi|^2 (1+r^2)^k)^{1/2} / (int |phi|^2 (1+r^2)^{-k})^{1/2}."""
    top = weighted_l2(d_power_apply(phi, k), k, **quadrature)
    bottom = weighted_l2(phi, -k, **quadrature)
    return math.sqrt(top / bottom)


def verify_euclidean_inequality(
    k: int,
    n: int,
    trials: int,
    source: str = "pullback_random",
    *,
    seed: int = DEFAULT_SEED,
    band_limit: int = 2,
    threads: int = 1,
    tol_one_sided: float = 1e-6,
    tol_sharp: float = 1e-5,
    tol_substitution: float = 1e-6,
    radial_nodes: int = 200,
    angular_degree: int = 16,
    config: dict | None = None,
) -> ResultRow:
    """
    Weighted D^k lower bound on R^n with constant 2^k sharp_constant(k, n).
    Pullback sources also compare against the sphere ratio (substitution
    bookkeeping); the extremal source must attain the constant.
    """
    if source not in SOURCES:
        raise ValueError(f"unknown source {source!r}; expected one of {SOURCES}")
    started = time.perf_counter()
    constant = euclidean_constant(k, n)
    name = {1: "weighted D lower bound", 2: "weighted Laplacian lower bound"}.get(k, f"weighted D^{k} lower bound")
    if constant == 0.0:
        write_log(f"euclidean suite skip | n={n} k={k} constant is zero", config=config)
        return ResultRow(
            suite="euclidean",
            name=name,
            n=n,
            k=k,
            constant=0.0,
            measured={"source": source},
            status="trivial",
            note="constant is zero: the sphere operator has a kernel, so no weighted bound holds (Rellich breakdown)",
            wall_time=time.perf_counter() - started,
        )

    write_log(f"euclidean suite start | n={n} k={k} source={source} trials={trials}", config=config)
    quad = {"radial_nodes": radial_nodes, "angular_degree": angular_degree}
    count = 1 if source == "pullback_extremal" else trials

    def trial(index: int) -> tuple[float, float]:
        rng = np.random.default_rng([seed, index])
        phi, psi = _source_fields(source, k, n, rng, band_limit)
        ratio = euclidean_ratio(phi, k, **quad)
        if psi is None:
            return ratio, 0.0
        sphere = 2.0**k * coefficient_norm(dsk_apply(psi, k)) / coefficient_norm(psi)
        return ratio, abs(ratio - sphere) / sphere

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(trial, range(count)))
    ratios = [r for r, _ in results]
    gaps = [g for _, g in results]
    min_ratio = min(ratios)
    checks = [
        Check("one_sided", min_ratio, ">=", constant * (1.0 - tol_one_sided)),
    ]
    measured = {"source": source, "ratio_min": min_ratio, "trials": count}
    if source != "random_rational":
        checks.append(Check("substitution", max(gaps), "<=", tol_substitution))
        measured["substitution_gap"] = max(gaps)
    if source == "pullback_extremal":
        gap = abs(ratios[0] - constant)
        measured["ratio_extremal"] = ratios[0]
        checks.append(Check("sharpness", gap, "<=", tol_sharp * max(1.0, constant)))
    row = ResultRow(
        suite="euclidean",
        name=name,
        n=n,
        k=k,
        constant=constant,
        measured=measured,
        checks=tuple(checks),
        note="constant = 2^k x sphere constant; D^k exact, integrals by tan-substitution quadrature",
        wall_time=time.perf_counter() - started,
    )
    write_log(f"euclidean suite row | n={n} k={k} source={source} pass={row.passed}", config=config)
    return row


def _kernel_valid(k: int, n: int) -> bool:
    return n % 2 == 1 or k < n


def _outer_grid(n: int, k: int, radial: int, angular: int) -> tuple[np.ndarray, np.ndarray]:
    """(points, weights) of the outer rule for int |.|^2 (1+r^2)^{-k}, weights shaped (T, U)."""
    outer = euclidean_rule(n, radial, angular)
    points = outer.points().reshape(-1, n)
    r2 = np.sum(points**2, axis=1).reshape(len(outer.theta), -1)
    weight = outer.radial_jacobian()[:, None] * outer.directions.weights[None, :] * (1.0 + r2) ** (-k)
    return points, weight


def _outer_norm(h: RationalField, k: int, grid: tuple[np.ndarray, np.ndarray], conv: dict) -> tuple[float, float]:
    """Weighted norm of G_k * h on one outer grid, and the same norm with the inner error added pointwise."""
    points, weight = grid
    values, errors = convolve_gk(h, k, points, **conv)
    mag = np.linalg.norm(values, axis=1).reshape(weight.shape)
    err = errors.reshape(weight.shape)
    lhs = math.sqrt(float(np.sum(weight * mag**2)))
    upper = math.sqrt(float(np.sum(weight * (mag + err) ** 2)))
    return lhs, upper


def verify_kernel_inequality(
    k: int,
    n: int,
    trials: int,
    *,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    slack: float = 0.0,
    cutoff_radius: float = 50.0,
    panels: int = 6,
    order: int = 10,
    angular_degree: int = 16,
    outer_radial: int = 12,
    outer_angular: int = 4,
    radial_nodes: int = 200,
    config: dict | None = None,
) -> ResultRow:
    """
    (int |G_k * h|^2 (1+r^2)^{-k})^{1/2} <= (int |h|^2 (1+r^2)^k)^{1/2} / (2^k sharp_constant).
    The left side uses an outer tan-substitution rule over convolution values,
    evaluated at two resolutions. A row passes when every ratio stays below
    1 + (inner error + outer error) + slack.
    """
    started = time.perf_counter()
    name = f"G_{k} convolution upper bound"
    if n not in KERNEL_DIMENSIONS:
        raise QuadratureError(f"kernel bounds support n in {KERNEL_DIMENSIONS}, got {n}")
    if not _kernel_valid(k, n):
        return ResultRow(
            suite="kernels",
            name=name,
            n=n,
            k=k,
            constant=0.0,
            status="trivial",
            note=f"G_{k} is not defined on R^{n} for even n and k >= n",
            wall_time=time.perf_counter() - started,
        )
    constant = euclidean_constant(k, n)
    coarse = _outer_grid(n, k, outer_radial, outer_angular)
    fine = _outer_grid(n, k, 2 * outer_radial, 2 * outer_angular)
    conv = {"cutoff_radius": cutoff_radius, "panels": panels, "order": order, "angular_degree": angular_degree}
    write_log(f"kernel suite start | n={n} k={k} trials={trials}", config=config)

    def trial(index: int) -> tuple[float, float, float]:
        rng = np.random.default_rng([seed, index])
        h = random_rational(n, k, rng)
        bound = math.sqrt(weighted_l2(h, k, radial_nodes=radial_nodes, angular_degree=angular_degree)) / constant
        lhs_coarse, _ = _outer_norm(h, k, coarse, conv)
        lhs, upper = _outer_norm(h, k, fine, conv)
        scale = max(lhs, 1e-300)
        return lhs / bound, (upper - lhs) / scale, abs(lhs - lhs_coarse) / scale

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(trial, range(trials)))
    max_ratio = max(r for r, _, _ in results)
    inner_err = max(e for _, e, _ in results)
    outer_err = max(e for _, _, e in results)
    q_err = max(i + o for _, i, o in results)
    row = ResultRow(
        suite="kernels",
        name=name,
        n=n,
        k=k,
        constant=constant,
        measured={
            "ratio_max": max_ratio,
            "quadrature_error": q_err,
            "inner_error": inner_err,
            "outer_error": outer_err,
            "cutoff_radius": cutoff_radius,
            "trials": trials,
        },
        checks=(Check("kernel_bound", max_ratio, "<=", 1.0 + q_err + slack),),
        note="ratio is lhs / bound; inputs truncated by a C^2 cutoff",
        wall_time=time.perf_counter() - started,
    )
    write_log(f"kernel suite row | n={n} k={k} pass={row.passed} ratio_max={max_ratio:.6g}", config=config)
    return row


def verify_kernel_transport(
    n: int,
    k: int = 1,
    samples: int = 6,
    *,
    seed: int = DEFAULT_SEED,
    band_limit: int = 1,
    tol: float = 1e-3,
    cutoff_radius: float = 400.0,
    panels: int = 8,
    order: int = 10,
    angular_degree: int = 16,
    config: dict | None = None,
) -> ResultRow:
    """
    With (G_k * h)(y) = int G_k(x - y) h(x) dx one has G_k * D^k phi = (-1)^{k+1} phi
    for decaying phi. Taking h = J_{-k} psi o C, the source of the transported
    inverse phi = J_k (C_k * psi) o C, the convolution must reproduce
    (-1)^{k+1} phi. The source identity D^k phi = (-1)^k J_{-k} psi o C is
    checked exactly at the same points.
    """
    started = time.perf_counter()
    name = f"G_{k} transport of the sphere inverse"
    if not _kernel_valid(k, n) or k >= n or sharp_constant(k, n) == 0.0:
        return ResultRow(
            suite="kernels",
            name=name,
            n=n,
            k=k,
            constant=None,
            status="trivial",
            note=f"transported inverse needs k < n and an invertible D_S^({k}) on S^{n}",
            wall_time=time.perf_counter() - started,
        )
    rng = np.random.default_rng([seed, n, k])
    psi = random_field(n, band_limit, rng)
    phi = pullback(spectral_inverse_apply(psi, k), k)
    h = pullback(psi, -k).scale((-1.0) ** k)
    y = rng.uniform(-1.0, 1.0, (samples, n))
    source = h.evaluate(y)
    source_gap = float(
        np.max(np.linalg.norm(d_power_apply(phi, k).evaluate(y) - source, axis=1))
        / max(float(np.max(np.linalg.norm(source, axis=1))), 1e-300)
    )
    values, errors = convolve_gk(
        h, k, y, cutoff_radius=cutoff_radius, panels=panels, order=order, angular_degree=angular_degree
    )
    expected = (-1.0) ** (k + 1) * phi.evaluate(y)
    rel = float(np.max(np.linalg.norm(values - expected, axis=1) / np.linalg.norm(expected, axis=1)))
    row = ResultRow(
        suite="kernels",
        name=name,
        n=n,
        k=k,
        constant=None,
        measured={
            "max_relative_error": rel,
            "source_gap": source_gap,
            "quadrature_error": float(np.max(errors)),
            "samples": samples,
        },
        checks=(Check("source", source_gap, "<=", 1e-8), Check("transport", rel, "<=", tol)),
        wall_time=time.perf_counter() - started,
    )
    write_log(f"kernel transport row | n={n} k={k} pass={row.passed} rel={rel:.3e}", config=config)
    return row


def verify_isometry(
    n: int,
    pairs: int,
    *,
    seed: int = DEFAULT_SEED,
    band_limit: int = 2,
    threads: int = 1,
    tol: float = 1e-6,
    radial_nodes: int = 200,
    angular_degree: int = 16,
    config: dict | None = None,
) -> ResultRow:
    """Sphere inner products against their Euclidean images under the isometric transform."""
    started = time.perf_counter()
    rule = default_rule(n, band_limit)
    write_log(f"isometry suite start | n={n} pairs={pairs}", config=config)

    def trial(index: int) -> float:
        rng = np.random.default_rng([seed, n, index])
        psi = random_field(n, band_limit, rng)
        phi = random_field(n, band_limit, rng)
        sphere, euclid = isometry_check(psi, phi, rule, radial_nodes, angular_degree)
        return abs(sphere - euclid) / (l2_norm(psi, rule) * l2_norm(phi, rule))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        errors = list(pool.map(trial, range(pairs)))
    worst = max(errors, default=0.0)
    row = ResultRow(
        suite="euclidean",
        name="sphere to R^n isometry",
        n=n,
        k=1,
        measured={"max_relative_error": worst, "pairs": pairs, "band_limit": band_limit},
        checks=(Check("isometry", worst, "<=", tol),),
        note="error relative to the product of the sphere norms",
        wall_time=time.perf_counter() - started,
    )
    write_log(f"isometry suite row | n={n} pass={row.passed} err={worst:.3e}", config=config)
    return row
