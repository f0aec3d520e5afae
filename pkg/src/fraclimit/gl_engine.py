"""Grünwald-Letnikov partial sums and the coupled limit ``h = q x / N``.

The truncated GL sum

.. math::

    G_N(x; h) = h^{-R} \\sum_{k=0}^{N} (-1)^k \\binom{R}{k} f(x - k h)

diverges for polynomials when ``h`` is held fixed and ``N`` grows; tying the
two together through ``h = q x / N`` with a characteristic root ``q``
recovers the Riemann-Liouville value.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import DegenerateError, ZeroStepError
from .functions import FunctionDescriptor, evaluate_function
from .rl_reference import rl_function
from .specfun import Rational, RationalLike, as_rational, real_branch_power

__all__ = [
    "MAX_N",
    "Handedness",
    "CoupledEvalResult",
    "ConvergenceRow",
    "gl_weights",
    "gl_partial_sum",
    "classical_derivative",
    "gl_coupled",
    "observed_order",
    "convergence_sweep",
]

MAX_N = 10**7


class Handedness(enum.Enum):
    """Direction of the GL stencil relative to the evaluation point."""

    #: ``h`` has the same sign as ``x`` (``q > 0``)
    Forward = "forward"
    #: ``h`` has the opposite sign, i.e. the reverse GL derivative (``q < 0``)
    Reverse = "reverse"

    @classmethod
    def from_coupling(cls, q: float) -> Handedness:
        return cls.Reverse if q < 0 else cls.Forward

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class CoupledEvalResult:
    x: float
    R: Rational
    q: float
    N: int
    h: float
    gl_value: float
    rl_value: float
    abs_error: float
    handedness: Handedness


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    h: float
    gl_value: float
    rl_value: float
    abs_error: float
    #: empirical order against the previous row, ``None`` on the first row
    observed_order: Optional[float] = None


def gl_weights(alpha: float, N: int) -> np.ndarray:
    """Signed weights ``(-1)^k C(alpha, k)`` for ``k = 0..N``.

    Built as a cumulative product of the ratios ``(k - alpha) / (k + 1)``,
    which reproduces :func:`~fraclimit.specfun.binomial_general` bit for bit.
    """
    k = np.arange(N, dtype=np.float64)
    w = np.empty(N + 1, dtype=np.float64)
    w[0] = 1.0
    np.cumprod((k - alpha) / (k + 1.0), out=w[1:])
    return w


def _check_n(N: int) -> int:
    if int(N) != N or N < 0:
        raise ValueError(f"N must be a non-negative integer, got {N!r}")
    if N > MAX_N:
        raise ValueError(f"N = {N} exceeds the cap of {MAX_N}")
    return int(N)


def gl_partial_sum(
    f: FunctionDescriptor, x: float, R: RationalLike, h: float, N: int
) -> float:
    """Truncated GL sum with step *h* and ``N + 1`` terms.

    Negative steps are allowed only when ``h**(-R)`` has a real branch, i.e.
    the denominator of *R* is odd.

    :raises ZeroStepError: if ``h == 0``.
    :raises BranchError: if ``h < 0`` and *R* has an even denominator.
    """
    R = as_rational(R)
    N = _check_n(N)
    x = float(x)
    h = float(h)
    if h == 0.0:
        raise ZeroStepError("GL sum needs a non-zero step h")

    scale = real_branch_power(h, -R)
    w = gl_weights(float(R), N)
    t = x - np.arange(N + 1, dtype=np.float64) * h
    terms = w * evaluate_function(f, t)
    return scale * math.fsum(terms.tolist())


def classical_derivative(f: FunctionDescriptor, n: int, x: float) -> float:
    """Integer-order derivative of the polynomial behind *f* at *x*."""
    coeffs = f.coefficients()
    total = []
    for degree in range(n, len(coeffs)):
        if coeffs[degree] != 0.0:
            falling = math.perm(degree, n)
            total.append(coeffs[degree] * falling * x ** (degree - n))
    return math.fsum(total)


def gl_coupled(
    f: FunctionDescriptor, x: float, R: RationalLike, q: float, N: int
) -> CoupledEvalResult:
    """Evaluate the GL sum with ``h = q x / N`` and compare with the RL value.

    ``q = 0`` is accepted only for positive integer *R*, where it stands for
    taking the ``N`` limit first, i.e. the classical derivative.

    :raises DegenerateError: if ``x == 0``, or ``q == 0`` with non-integer *R*.
    """
    R = as_rational(R)
    N = _check_n(N)
    x = float(x)
    q = float(q)
    if x == 0.0:
        raise DegenerateError("coupling h = q x / N degenerates at x = 0")
    if N == 0:
        raise ValueError("coupled evaluation needs N >= 1")

    rl_value = rl_function(f, R, x).value
    if q == 0.0:
        if R.denominator != 1 or R <= 0:
            raise DegenerateError(
                f"q = 0 is only meaningful for positive integer order, got R = {R}"
            )
        gl_value = classical_derivative(f, R.numerator, x)
        h = 0.0
    else:
        h = q * x / N
        gl_value = gl_partial_sum(f, x, R, h, N)

    return CoupledEvalResult(
        x=x,
        R=R,
        q=q,
        N=N,
        h=h,
        gl_value=gl_value,
        rl_value=rl_value,
        abs_error=abs(gl_value - rl_value),
        handedness=Handedness.from_coupling(q),
    )


def observed_order(err0: float, err1: float, n0: int, n1: int) -> Optional[float]:
    """``log(err0 / err1) / log(n1 / n0)``; ``None`` if either error is zero."""
    if err0 <= 0.0 or err1 <= 0.0:
        return None
    return math.log(err0 / err1) / math.log(n1 / n0)


def convergence_sweep(
    f: FunctionDescriptor,
    x: float,
    R: RationalLike,
    q: float,
    schedule: Sequence[int],
    workers: Optional[int] = None,
) -> List[ConvergenceRow]:
    """Run :func:`gl_coupled` over a strictly increasing *schedule* of ``N``.

    With ``workers > 1`` the entries are evaluated on a thread pool; the rows
    are identical to the sequential run since entries share no state.
    """
    schedule = [int(n) for n in schedule]
    if not schedule:
        raise ValueError("empty schedule")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"schedule must be strictly increasing: {schedule}")

    R = as_rational(R)

    def run(n: int) -> CoupledEvalResult:
        return gl_coupled(f, x, R, q, n)

    if workers is not None and workers > 1 and len(schedule) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, schedule))
    else:
        results = [run(n) for n in schedule]

    rows = []
    prev = None
    for r in results:
        order = None
        if prev is not None:
            order = observed_order(prev.abs_error, r.abs_error, prev.N, r.N)
        rows.append(ConvergenceRow(r.N, r.h, r.gl_value, r.rl_value, r.abs_error, order))
        prev = r
    return rows
