"""Binomial and hypergeometric identities behind the coupled-limit analysis.

Each identity comes as a pair: a brute-force side that sums the series term
by term, and a closed (or asymptotic) side. The pairs are compared by the
test suite and by ``fraclimit verify``.

Exact identities:

* alternating partial sums: ``sum_{k<=N} (-1)^k C(R,k) = (-1)^N C(R-1,N)``
* ``sum_j C(m,j) (-q)^j / (R-j) = 2F1(-m, -R; 1-R; q) / R``
* its ``q = 1`` slice, ``R^-1 C(m-R, m)^-1``
* reflection, ``Gamma(1+R) Gamma(1-R) = pi R / sin(pi R)``

Asymptotic ones (``N, m -> oo``):

* ``(-1)^N C(R,N) ~ -sin(pi R)/pi Gamma(R+1) N^(-R-1)``
* ``C(m,R) ~ -sin(pi R)/pi Gamma(-R) m^R``
* ``sum_{k<=N} (-1)^k C(R,k) k^j ~ (-1)^N R/(R-j) C(R-1,N) N^j``
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .specfun import (
    POLE_TOL,
    binomial_general,
    gamma,
    log_binomial_signed,
    sinpi,
)

__all__ = [
    "MAX_MOMENT",
    "LOG_PATH_THRESHOLD",
    "AsymptoticCheck",
    "alternating_binomials",
    "pascal_sum_brute",
    "pascal_closed",
    "moment_sum_brute",
    "moment_closed_asymptotic",
    "result2_lhs",
    "result3_closed",
    "asymptotic_pascal",
    "asymptotic_binom_upper",
    "check_asymptotic",
]

MAX_MOMENT = 8
LOG_PATH_THRESHOLD = 1000


@dataclass(frozen=True)
class AsymptoticCheck:
    """One brute-vs-asymptotic comparison at a given ``N`` (or ``m``)."""

    lhs: float
    rhs: float
    ratio: float
    N_or_m: int


def alternating_binomials(R: float, N: int) -> list:
    """``[(-1)^k C(R, k) for k in 0..N]`` by the forward recurrence."""
    R = float(R)
    out = [1.0]
    c = 1.0
    for j in range(N):
        c *= (j - R) / (j + 1)
        out.append(c)
    return out


def _is_integer_in(R: float, lo: int, hi: int) -> bool:
    n = round(R)
    return abs(R - n) < POLE_TOL and lo <= n <= hi


def pascal_sum_brute(R: float, N: int) -> float:
    """``sum_{k=0}^{N} (-1)^k C(R, k)`` summed term by term."""
    if N < 0:
        raise ValueError(f"N must be non-negative: {N}")
    return math.fsum(alternating_binomials(R, N))


def pascal_closed(R: float, N: int) -> float:
    """``(-1)^N C(R - 1, N)``; log-space evaluation above ``N = 1000``."""
    if N < 0:
        raise ValueError(f"N must be non-negative: {N}")
    if N > LOG_PATH_THRESHOLD:
        v = log_binomial_signed(float(R) - 1.0, N)
        return -v.reconstruct() if N % 2 else v.reconstruct()
    c = binomial_general(float(R) - 1.0, N)
    return -c if N % 2 else c


def moment_sum_brute(R: float, N: int, j: int) -> float:
    """``sum_{k=0}^{N} (-1)^k C(R, k) k^j`` summed term by term."""
    if not 0 <= j <= MAX_MOMENT:
        raise ParameterError(f"moment order j must lie in 0..{MAX_MOMENT}, got {j}")
    w = alternating_binomials(R, N)
    if j == 0:
        return math.fsum(w)
    return math.fsum(wk * float(k) ** j for k, wk in enumerate(w))


def moment_closed_asymptotic(R: float, N: int, j: int) -> float:
    """Leading-order form ``(-1)^N R/(R-j) C(R-1, N) N^j``."""
    R = float(R)
    if N < 1:
        raise ValueError(f"N must be positive: {N}")
    if abs(R - j) < POLE_TOL:
        raise ParameterError(f"R/(R - j) is singular at R = j = {j}")
    prefactor = R / (R - j)
    if j == 0:
        return prefactor * pascal_closed(R, N)
    v = log_binomial_signed(R - 1.0, N)
    if v.sign == 0 or prefactor == 0.0:
        return 0.0
    sign = v.sign * (-1 if N % 2 else 1) * (1 if prefactor > 0 else -1)
    return sign * math.exp(v.log_magnitude + j * math.log(N) + math.log(abs(prefactor)))


def result2_lhs(m: int, R: float, q: float) -> float:
    """``sum_{j=0}^{m} C(m, j) (-q)^j / (R - j)``."""
    R = float(R)
    q = float(q)
    if _is_integer_in(R, 0, m):
        raise ParameterError(f"term 1/(R - j) is singular for integer R = {R!r} <= m")
    return math.fsum(math.comb(m, j) * (-q) ** j / (R - j) for j in range(m + 1))


def result3_closed(m: int, R: float) -> float:
    """``1 / (R C(m - R, m))``, the ``q = 1`` value of :func:`result2_lhs`."""
    R = float(R)
    if _is_integer_in(R, 0, m):
        raise ParameterError(f"closed form singular for integer R = {R!r} <= m")
    # integer lower index: the product form has no gamma poles
    b = binomial_general(m - R, m)
    if b == 0.0:
        raise ParameterError(f"C(m - R, m) vanishes at m = {m}, R = {R!r}")
    return 1.0 / (R * b)


def asymptotic_pascal(R: float, N: int) -> float:
    """``-sin(pi R)/pi Gamma(R + 1) N^(-R-1)``, large-``N`` form of ``(-1)^N C(R, N)``."""
    R = float(R)
    if N < 1:
        raise ValueError(f"N must be positive: {N}")
    s = sinpi(R)
    if s == 0.0:
        return 0.0
    return -s / math.pi * gamma(R + 1.0) * float(N) ** (-R - 1.0)


def asymptotic_binom_upper(m: int, R: float) -> float:
    """``-sin(pi R)/pi Gamma(-R) m^R``, large-``m`` form of ``C(m, R)``."""
    R = float(R)
    if m < 1:
        raise ValueError(f"m must be positive: {m}")
    if _is_integer_in(R, 0, math.inf):
        raise ParameterError(f"Gamma(-R) has a pole at R = {R!r}")
    return -sinpi(R) / math.pi * gamma(-R) * float(m) ** R


def check_asymptotic(lhs: float, rhs: float, n: int) -> AsymptoticCheck:
    ratio = lhs / rhs if rhs != 0.0 else math.nan
    return AsymptoticCheck(lhs=lhs, rhs=rhs, ratio=ratio, N_or_m=n)
