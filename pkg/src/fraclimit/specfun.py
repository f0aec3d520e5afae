"""Special-function kernel: gamma, generalized binomials, terminating 2F1
and real-branch powers.

Everything here is scalar, pure and self-contained (no scipy). The gamma
function uses a fixed Lanczos approximation (g = 7, nine coefficients) and
the reflection formula below z = 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import BranchError, ParameterError, PoleError, SingularError

__all__ = [
    "Rational",
    "RationalLike",
    "SignedLogValue",
    "as_rational",
    "sinpi",
    "is_gamma_pole",
    "gamma",
    "log_gamma_signed",
    "binomial_general",
    "log_binomial_signed",
    "log_gamma_shift_ratio",
    "binomial_real_real",
    "reflection_rhs",
    "real_branch_power",
    "hyp2f1_terminating",
]

POLE_TOL = 1e-12

_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# beyond this the direct product t**(z+1/2) overflows
_DIRECT_GAMMA_MAX = 171.0


# {{{ rationals


class Rational(Fraction):
    """An exact fraction ``p/s`` with ``s > 0`` in lowest terms.

    Used for derivative orders, where the parity of the denominator decides
    whether a negative base has a real branch.
    """

    def value(self) -> float:
        return float(self)

    @property
    def odd_denominator(self) -> bool:
        return self.denominator % 2 == 1

    def __repr__(self) -> str:
        return f"Rational({self.numerator}, {self.denominator})"


RationalLike = Union[Rational, Fraction, int, float, str]


def as_rational(value: RationalLike) -> Rational:
    """Convert *value* to a :class:`Rational`.

    Strings may be ``"p/s"`` or decimals (``"0.5"``), the latter being taken
    exactly over a power of ten. Floats go through their shortest decimal
    representation, so ``0.1`` becomes ``1/10`` rather than its binary
    expansion.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"order must be finite: {value!r}")
        value = repr(value)
    if isinstance(value, str):
        value = value.strip()
    return Rational(value)


# }}}


# {{{ gamma


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as ``sign * exp(log_magnitude)``."""

    log_magnitude: float
    sign: int

    def reconstruct(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: SignedLogValue) -> SignedLogValue:
        sign = self.sign * other.sign
        if sign == 0:
            return SignedLogValue(-math.inf, 0)
        return SignedLogValue(self.log_magnitude + other.log_magnitude, sign)

    def __truediv__(self, other: SignedLogValue) -> SignedLogValue:
        if other.sign == 0:
            raise ZeroDivisionError("division by a SignedLogValue equal to zero")
        if self.sign == 0:
            return self
        return SignedLogValue(
            self.log_magnitude - other.log_magnitude, self.sign * other.sign
        )


ZERO = SignedLogValue(-math.inf, 0)


def is_gamma_pole(z: float) -> bool:
    n = round(z)
    return n <= 0 and abs(z - n) < POLE_TOL


def _check_pole(z: float) -> None:
    if is_gamma_pole(z):
        raise PoleError(f"gamma has a pole at z = {z!r}")


def sinpi(x: float) -> float:
    """Compute ``sin(pi * x)`` with exact argument reduction."""
    n = round(x)
    r = x - n
    if r == 0.0:
        return 0.0
    s = math.sin(math.pi * r)
    return -s if n % 2 else s


def _lanczos_sum(zm1: float) -> float:
    acc = _LANCZOS_COEFFS[0]
    for i in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[i] / (zm1 + i)
    return acc


def _gamma_positive(z: float) -> float:
    # z >= 1/2
    zm1 = z - 1.0
    t = zm1 + _LANCZOS_G + 0.5
    half = t ** (0.5 * (zm1 + 0.5))
    return _SQRT_2PI * half * (half * math.exp(-t)) * _lanczos_sum(zm1)


def _log_gamma_positive(z: float) -> float:
    zm1 = z - 1.0
    t = zm1 + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (zm1 + 0.5) * math.log(t) - t + math.log(_lanczos_sum(zm1))


def gamma(z: float) -> float:
    """Gamma function for real *z*.

    :raises PoleError: if *z* is within ``1e-12`` of a non-positive integer.
    :raises OverflowError: if the result does not fit a double.
    """
    z = float(z)
    _check_pole(z)
    if z < 0.5:
        # reflection: G(z) G(1 - z) = pi / sin(pi z)
        return math.pi / (sinpi(z) * gamma(1.0 - z))
    if z > _DIRECT_GAMMA_MAX:
        raise OverflowError(f"gamma({z}) overflows a double")
    if z == int(z):
        return float(math.factorial(int(z) - 1))
    return _gamma_positive(z)


def log_gamma_signed(z: float) -> SignedLogValue:
    """Return ``log|Gamma(z)|`` together with the sign of ``Gamma(z)``."""
    z = float(z)
    _check_pole(z)
    if z < 0.5:
        s = sinpi(z)
        rest = log_gamma_signed(1.0 - z)
        return SignedLogValue(
            math.log(math.pi) - math.log(abs(s)) - rest.log_magnitude,
            1 if s > 0 else -1,
        )
    if z <= 30.0:
        # direct evaluation is more accurate where lgamma is close to zero
        return SignedLogValue(math.log(_gamma_positive(z)), 1)
    return SignedLogValue(_log_gamma_positive(z), 1)


def log_gamma_shift_ratio(k: int, a: float, b: float) -> float:
    """``log(Gamma(k + a) / Gamma(k + b))`` for a large integer *k*.

    Keeps the integer part separate from the small offsets so neither the
    rounding of ``k + a`` nor the cancellation between two log-gammas of
    size ``k log k`` pollutes the result. Requires ``k + min(a, b) > 30``.
    """
    if k + min(a, b) <= 30.0:
        raise ValueError("log_gamma_shift_ratio needs k + min(a, b) > 30")
    shift = _LANCZOS_G - 0.5
    tb = k + (b + shift)
    ta = k + (a + shift)
    d = a - b
    return (
        d * math.log(ta)
        + (k + (b - 0.5)) * math.log1p(d / tb)
        - d
        + math.log(_lanczos_sum(k + (a - 1.0)) / _lanczos_sum(k + (b - 1.0)))
    )


def _rgamma_is_zero(z: float) -> bool:
    """True where ``1/Gamma(z)`` vanishes."""
    return is_gamma_pole(z)


# }}}


# {{{ binomials


def binomial_general(alpha: float, k: int) -> float:
    """Generalized binomial coefficient ``C(alpha, k)`` by forward recurrence.

    ``c_0 = 1`` and ``c_{j+1} = c_j * ((alpha - j) / (j + 1))``. The ratio is
    formed first so the sequence is bit-identical to a cumulative product of
    the ratios (which is how :mod:`fraclimit.gl_engine` builds its weights).
    """
    if k < 0:
        raise ValueError(f"k must be non-negative: {k}")
    alpha = float(alpha)
    c = 1.0
    for j in range(k):
        c *= (alpha - j) / (j + 1)
    return c


def log_binomial_signed(alpha: float, k: int) -> SignedLogValue:
    """``C(alpha, k)`` in log space, safe for ``k`` up to ~1e7."""
    if k < 0:
        raise ValueError(f"k must be non-negative: {k}")
    alpha = float(alpha)
    n = round(alpha)
    if alpha == n and n >= 0:
        if k > n:
            return ZERO
        return SignedLogValue(math.log(math.comb(n, k)), 1)

    sign = -1 if k % 2 else 1
    if alpha == n and k <= 1000:
        # C(-a, k) = (-1)^k C(a + k - 1, k)
        return SignedLogValue(math.log(math.comb(k - n - 1, k)), sign)

    # (-1)^k C(alpha, k) = Gamma(k - alpha) / (Gamma(-alpha) Gamma(k + 1))
    if k + min(-alpha, 1.0) > 30.0:
        log_ratio = SignedLogValue(log_gamma_shift_ratio(k, -alpha, 1.0), 1)
    else:
        log_ratio = log_gamma_signed(k - alpha) / log_gamma_signed(k + 1.0)
    result = log_ratio / log_gamma_signed(-alpha)
    return SignedLogValue(result.log_magnitude, sign * result.sign)


def binomial_real_real(m: float, R: float) -> float:
    """``Gamma(m + 1) / (Gamma(R + 1) Gamma(m - R + 1))`` for real ``m``, ``R``.

    Poles in the denominator give ``0`` (reciprocal-gamma convention).

    :raises PoleError: if ``Gamma(m + 1)`` itself has a pole.
    """
    m = float(m)
    R = float(R)
    _check_pole(m + 1.0)
    if _rgamma_is_zero(R + 1.0) or _rgamma_is_zero(m - R + 1.0):
        return 0.0

    args = (m + 1.0, R + 1.0, m - R + 1.0)
    if all(abs(a) <= 30.0 for a in args):
        return gamma(args[0]) / (gamma(args[1]) * gamma(args[2]))

    if min(args[0], args[2]) > 31.0:
        k = math.floor(m)
        frac = m - k
        log_ratio = log_gamma_shift_ratio(k, frac + 1.0, frac - R + 1.0)
        value = SignedLogValue(log_ratio, 1) / log_gamma_signed(args[1])
    else:
        value = log_gamma_signed(args[0]) / (
            log_gamma_signed(args[1]) * log_gamma_signed(args[2])
        )
    return value.reconstruct()


# }}}


def reflection_rhs(R: float) -> float:
    """``pi R / sin(pi R)``, equal to ``Gamma(1 + R) Gamma(1 - R)``.

    :raises SingularError: for non-zero integer *R*.
    """
    R = float(R)
    if R == 0.0:
        return 1.0
    s = sinpi(R)
    if s == 0.0:
        raise SingularError(f"pi R / sin(pi R) is singular at R = {R!r}")
    return math.pi * R / s


def real_branch_power(q: float, R: RationalLike) -> float:
    """Real power ``q**R`` taking the real branch for negative *q*.

    For ``q < 0`` and ``R = p/s`` with odd ``s`` this is
    ``(-1)**p * |q|**(p/s)``, so ``real_branch_power(-8, 1/3) == -2``.

    :raises BranchError: if ``q < 0`` and ``s`` is even, or ``q = 0`` and
        ``R < 0``.
    """
    R = as_rational(R)
    q = float(q)
    if q > 0.0:
        if R.denominator == 1:
            return q ** R.numerator
        return q ** float(R)
    if q == 0.0:
        if R < 0:
            raise BranchError(f"0 ** {R} is not finite")
        return 1.0 if R == 0 else 0.0
    if R.denominator % 2 == 0:
        raise BranchError(f"({q}) ** {R} has no real branch (even denominator)")
    magnitude = (-q) ** float(R)
    return -magnitude if R.numerator % 2 else magnitude


def _is_small_integer(R: float, lo: int, hi: int) -> bool:
    n = round(R)
    return abs(R - n) < POLE_TOL and lo <= n <= hi


def hyp2f1_terminating(m: int, R: float, q: float) -> float:
    """Terminating Gauss series ``2F1(-m, -R; 1 - R; q)``.

    Sums exactly ``m + 1`` terms using the term ratio
    ``(j - m)(j - R) / ((j + 1 - R)(j + 1)) * q``.

    :raises ParameterError: if *R* is an integer in ``0..m`` (for ``m >= 1``),
        where the lower parameter ``1 - R`` collides with the termination.
    """
    if m < 0:
        raise ValueError(f"m must be non-negative: {m}")
    R = float(R)
    q = float(q)
    if m >= 1 and _is_small_integer(R, 0, m):
        raise ParameterError(f"2F1(-{m}, -R; 1 - R; q) undefined for integer R = {R!r}")

    term = 1.0
    total = [term]
    for j in range(m):
        term *= (j - m) * (j - R) / ((j + 1 - R) * (j + 1)) * q
        total.append(term)
    return math.fsum(total)
