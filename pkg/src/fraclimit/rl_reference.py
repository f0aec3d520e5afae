"""Closed-form Riemann-Liouville derivatives (lower terminal 0).

Only the power rule ``D^R x^m = Gamma(m+1)/Gamma(m-R+1) x^(m-R)`` is used,
extended linearly to polynomials and truncated Taylor series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

from .functions import TAYLOR_KINDS, FunctionDescriptor
from .specfun import (
    RationalLike,
    as_rational,
    gamma,
    is_gamma_pole,
    log_gamma_signed,
    real_branch_power,
)

__all__ = ["RLValue", "rl_power", "rl_polynomial", "rl_taylor", "rl_function"]


@dataclass(frozen=True)
class RLValue:
    """An RL derivative value with its per-monomial breakdown.

    ``terms`` holds ``(degree, coefficient, contribution)`` triples.
    """

    value: float
    terms: List[Tuple[int, float, float]] = field(default_factory=list)

    def __float__(self) -> float:
        return self.value


def _gamma_ratio(m: int, R: float) -> float:
    """``Gamma(m + 1) / Gamma(m - R + 1)``, zero at denominator poles."""
    if is_gamma_pole(m - R + 1.0):
        return 0.0
    try:
        return gamma(m + 1.0) / gamma(m - R + 1.0)
    except OverflowError:
        return (log_gamma_signed(m + 1.0) / log_gamma_signed(m - R + 1.0)).reconstruct()


def rl_power(m: int, R: RationalLike, x: float) -> float:
    """RL derivative of order *R* of ``x**m`` evaluated at *x*.

    :raises BranchError: if ``x < 0`` and ``x**(m - R)`` has no real branch.
    """
    R = as_rational(R)
    x = float(x)
    ratio = _gamma_ratio(m, float(R))
    if ratio == 0.0:
        return 0.0
    return ratio * real_branch_power(x, m - R)


def rl_polynomial(coeffs: Sequence[float], R: RationalLike, x: float) -> RLValue:
    R = as_rational(R)
    terms = []
    for degree, c in enumerate(coeffs):
        c = float(c)
        if c == 0.0:
            continue
        terms.append((degree, c, c * rl_power(degree, R, x)))
    return RLValue(math.fsum(t[2] for t in terms), terms)


def rl_taylor(f: FunctionDescriptor, R: RationalLike, x: float) -> RLValue:
    """Termwise RL derivative of a truncated Taylor descriptor."""
    if not isinstance(f, TAYLOR_KINDS):
        raise TypeError(f"expected a Taylor descriptor, got {type(f).__name__}")
    return rl_polynomial(f.coefficients(), R, x)


def rl_function(f: FunctionDescriptor, R: RationalLike, x: float) -> RLValue:
    """RL derivative of any descriptor (all of them are polynomials here)."""
    return rl_polynomial(f.coefficients(), R, x)
