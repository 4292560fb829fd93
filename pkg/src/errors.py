"""
Exception family for dirac-sharp. Everything raised on purpose derives from
DiracSharpError so the command layer can map it to exit codes.
"""


class DiracSharpError(Exception):
    """Base class."""


class SignatureMismatch(DiracSharpError):
    pass


class GradeError(DiracSharpError):
    pass


class NotHarmonicError(DiracSharpError):
    pass


class NotMonogenicError(DiracSharpError):
    pass


class SingularityError(DiracSharpError):
    pass


class QuadratureError(DiracSharpError):
    pass


class KernelDegenerateError(DiracSharpError):
    pass


class ConfigError(DiracSharpError):
    pass


class NotInvertibleError(DiracSharpError):
    """Zero eigenvalue of D_S^(k); carries where the kernel sits."""

    def __init__(self, n: int, k: int, m: int, message: str | None = None):
        self.n = n
        self.k = k
        self.m = m
        super().__init__(
            message
            or f"D_S^({k}) on S^{n} is not invertible: zero eigenvalue at degree m={m}"
        )


class IntegrabilityError(DiracSharpError):
    """Weighted integral over R^n would diverge."""

    def __init__(self, exponent: float, n: int):
        self.exponent = exponent
        self.n = n
        super().__init__(
            f"integrand decays like r^{exponent:g} in R^{n}; need exponent < {-n}"
        )
