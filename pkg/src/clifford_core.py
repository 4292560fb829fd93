"""
Real Clifford algebra Cl_N with every generator squaring to -1.

Multivectors are dense coefficient vectors of length 2^N indexed by blade
bitmask (bit i set <=> e_{i+1} present). Products go through a sign table that
is built once per dimension. The array-level helpers (``gp_arrays`` and
friends) work on stacks of coefficient vectors with shape (..., 2^N) so the
sphere and Euclidean layers can multiply fields pointwise without Python loops.
"""
import threading
from dataclasses import dataclass, field

import numpy as np

from src.errors import GradeError, SignatureMismatch

MAX_DIM = 8

_SIGN_TABLES: dict[int, np.ndarray] = {}
_SIGN_LOCK = threading.Lock()


@dataclass(frozen=True)
class Signature:
    """Cl_N with N = dim generators, e_i^2 = -1."""

    dim: int

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"Clifford dimension must be in [1, {MAX_DIM}], got {self.dim}")

    @property
    def size(self) -> int:
        return 1 << self.dim


def _popcount(values: np.ndarray, dim: int) -> np.ndarray:
    count = np.zeros_like(values)
    for bit in range(dim):
        count += (values >> bit) & 1
    return count


def sign_table(dim: int) -> np.ndarray:
    """
    table[a, b] = sign of blade(a) * blade(b) relative to blade(a ^ b).
    Transpositions are counted with popcounts; each repeated generator adds a -1.
    """
    table = _SIGN_TABLES.get(dim)
    if table is not None:
        return table
    with _SIGN_LOCK:
        table = _SIGN_TABLES.get(dim)
        if table is None:
            size = 1 << dim
            a = np.arange(size)[:, None]
            b = np.arange(size)[None, :]
            swaps = np.zeros((size, size), dtype=np.int64)
            for shift in range(1, dim + 1):
                swaps += _popcount((a >> shift) & b, dim)
            repeats = _popcount(a & b, dim)
            table = np.where((swaps + repeats) % 2 == 0, 1.0, -1.0)
            table.setflags(write=False)
            _SIGN_TABLES[dim] = table
    return table


def blade_grades(dim: int) -> np.ndarray:
    return _popcount(np.arange(1 << dim), dim)


def gp_arrays(a: np.ndarray, b: np.ndarray, dim: int) -> np.ndarray:
    """Geometric product of coefficient stacks shaped (..., 2^dim); broadcasts."""
    table = sign_table(dim)
    size = 1 << dim
    idx = np.arange(size)
    shape = np.broadcast_shapes(np.shape(a), np.shape(b))
    out = np.zeros(shape, dtype=float)
    for blade in range(size):
        perm = blade ^ idx
        out += a[..., blade : blade + 1] * (table[blade, perm] * b[..., perm])
    return out


def left_mult_matrix(a: np.ndarray, dim: int) -> np.ndarray:
    """Matrix L with L @ coeffs(B) = coeffs(A B)."""
    table = sign_table(dim)
    size = 1 << dim
    mat = np.zeros((size, size))
    cols = np.arange(size)
    for blade in np.flatnonzero(a):
        mat[blade ^ cols, cols] += a[blade] * table[blade, cols]
    return mat


def embed_vectors(x: np.ndarray, dim: int) -> np.ndarray:
    """(..., m) vector components with m <= dim -> (..., 2^dim) grade-1 coefficients."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1] + (1 << dim,))
    for j in range(x.shape[-1]):
        out[..., 1 << j] = x[..., j]
    return out


def reversion_signs(dim: int) -> np.ndarray:
    r = blade_grades(dim)
    return np.where((r * (r - 1) // 2) % 2 == 0, 1.0, -1.0)


def conjugation_signs(dim: int) -> np.ndarray:
    r = blade_grades(dim)
    return np.where((r * (r + 1) // 2) % 2 == 0, 1.0, -1.0)


def _blade_name(mask: int) -> str:
    if mask == 0:
        return "1"
    return "".join(f"e{i + 1}" for i in range(MAX_DIM) if mask >> i & 1)


@dataclass(frozen=True, eq=False)
class Multivector:
    sig: Signature
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float)
        if coeffs.shape != (self.sig.size,):
            raise ValueError(f"expected {self.sig.size} coefficients, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("multivector coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls(sig, np.zeros(sig.size))

    @classmethod
    def scalar(cls, sig: Signature, value: float) -> "Multivector":
        coeffs = np.zeros(sig.size)
        coeffs[0] = value
        return cls(sig, coeffs)

    @classmethod
    def basis(cls, sig: Signature, i: int) -> "Multivector":
        """Generator e_i, 1-based."""
        if not 1 <= i <= sig.dim:
            raise ValueError(f"generator index {i} outside 1..{sig.dim}")
        coeffs = np.zeros(sig.size)
        coeffs[1 << (i - 1)] = 1.0
        return cls(sig, coeffs)

    @classmethod
    def vector(cls, sig: Signature, components) -> "Multivector":
        components = np.asarray(components, dtype=float)
        if components.shape[-1] > sig.dim:
            raise ValueError("too many vector components for this signature")
        return cls(sig, embed_vectors(components, sig.dim))

    @classmethod
    def blade(cls, sig: Signature, *indices: int, value: float = 1.0) -> "Multivector":
        """value * e_{i1} e_{i2} ... in the given order (sign applied)."""
        out = cls.scalar(sig, value)
        for i in indices:
            out = out * cls.basis(sig, i)
        return out

    def grade(self, r: int) -> "Multivector":
        mask = blade_grades(self.sig.dim) == r
        return Multivector(self.sig, np.where(mask, self.coeffs, 0.0))

    def grades(self, tol: float = 0.0) -> set[int]:
        r = blade_grades(self.sig.dim)
        scale = max(tol * np.max(np.abs(self.coeffs), initial=0.0), 0.0)
        return {int(g) for g in np.unique(r[np.abs(self.coeffs) > scale])}

    def is_vector(self, tol: float = 1e-12) -> bool:
        return self.grades(tol) <= {1}

    def vector_part(self) -> np.ndarray:
        return np.array([self.coeffs[1 << j] for j in range(self.sig.dim)])

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.coeffs, self.coeffs)))

    def _check(self, other: "Multivector") -> None:
        if self.sig != other.sig:
            raise SignatureMismatch(f"Cl_{self.sig.dim} vs Cl_{other.sig.dim}")

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.sig, other)
        self._check(other)
        return Multivector(self.sig, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Multivector.scalar(self.sig, other)
        self._check(other)
        return Multivector(self.sig, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.sig, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return Multivector(self.sig, self.coeffs * float(other))

    def __rmul__(self, other):
        return Multivector(self.sig, self.coeffs * float(other))

    def __truediv__(self, other: float):
        return Multivector(self.sig, self.coeffs / float(other))

    def allclose(self, other: "Multivector", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol))

    def __repr__(self) -> str:
        terms = [
            f"{c:+.12g} * {_blade_name(mask)}"
            for mask, c in enumerate(self.coeffs)
            if c != 0.0
        ]
        return "Multivector(" + (" ".join(terms) if terms else "0") + ")"


@dataclass(frozen=True, eq=False)
class Versor:
    """Element of GPin(N), certified by its factor list."""

    value: Multivector
    factors: tuple[Multivector, ...]

    @classmethod
    def from_factors(cls, factors) -> "Versor":
        factors = tuple(factors)
        if not factors:
            raise ValueError("a versor needs at least one factor")
        sig = factors[0].sig
        value = Multivector.scalar(sig, 1.0)
        for f in factors:
            if not f.is_vector() or f.norm() == 0.0:
                raise GradeError("versor factors must be nonzero vectors")
            value = value * f
        return cls(value, factors)

    def norm(self) -> float:
        return self.value.norm()


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    if a.sig != b.sig:
        raise SignatureMismatch(f"Cl_{a.sig.dim} vs Cl_{b.sig.dim}")
    return Multivector(a.sig, gp_arrays(a.coeffs, b.coeffs, a.sig.dim))


def reversion(a: Multivector) -> Multivector:
    return Multivector(a.sig, a.coeffs * reversion_signs(a.sig.dim))


def conjugation(a: Multivector) -> Multivector:
    return Multivector(a.sig, a.coeffs * conjugation_signs(a.sig.dim))


def scalar_part(a: Multivector) -> float:
    return float(a.coeffs[0])


def vector_inverse(x: Multivector) -> Multivector:
    """x^{-1} = -x / ||x||^2 for a nonzero vector."""
    if not x.is_vector():
        raise GradeError(f"vector_inverse needs a grade-1 element, got grades {sorted(x.grades())}")
    norm2 = float(np.dot(x.coeffs, x.coeffs))
    if norm2 == 0.0:
        raise GradeError("zero vector has no inverse")
    return Multivector(x.sig, -x.coeffs / norm2)


def random_vector(rng: np.random.Generator, sig: Signature, min_norm: float = 1e-3) -> Multivector:
    while True:
        comps = rng.uniform(-1.0, 1.0, size=sig.dim)
        if np.linalg.norm(comps) >= min_norm:
            return Multivector.vector(sig, comps)


def random_versor(rng: np.random.Generator, num_factors: int, sig: Signature) -> Versor:
    if num_factors < 1:
        raise ValueError("num_factors must be >= 1")
    return Versor.from_factors(random_vector(rng, sig) for _ in range(num_factors))


def random_versor_arrays(rng: np.random.Generator, count: int, num_factors: int, dim: int) -> np.ndarray:
    """Stack of ``count`` versor coefficient vectors, built like random_versor."""
    out = np.zeros((count, 1 << dim))
    out[:, 0] = 1.0
    for _ in range(num_factors):
        comps = rng.uniform(-1.0, 1.0, size=(count, dim))
        small = np.linalg.norm(comps, axis=1) < 1e-3
        while np.any(small):
            comps[small] = rng.uniform(-1.0, 1.0, size=(int(small.sum()), dim))
            small = np.linalg.norm(comps, axis=1) < 1e-3
        out = gp_arrays(out, embed_vectors(comps, dim), dim)
    return out
