"""Differentiands: pure powers, explicit polynomials and truncated Taylor series.

Every descriptor reduces to an ascending coefficient list, so the GL sum and
the RL closed form always see exactly the same polynomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

__all__ = [
    "Power",
    "Polynomial",
    "TaylorExp",
    "TaylorSin",
    "TaylorCos",
    "FunctionDescriptor",
    "DEFAULT_TAYLOR_TERMS",
    "evaluate_function",
    "parse_function",
]

DEFAULT_TAYLOR_TERMS = 12


def _check_nonnegative(name: str, value: int) -> None:
    if int(value) != value or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")


@dataclass(frozen=True)
class Power:
    """The monomial ``x**m``."""

    m: int

    def __post_init__(self) -> None:
        _check_nonnegative("m", self.m)

    def coefficients(self) -> Tuple[float, ...]:
        return (0.0,) * self.m + (1.0,)


@dataclass(frozen=True)
class Polynomial:
    """``sum(coeffs[i] * x**i)``, coefficients in ascending degree."""

    coeffs: Tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]) -> None:
        coeffs = tuple(float(c) for c in coeffs)
        if not coeffs:
            raise ValueError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    def coefficients(self) -> Tuple[float, ...]:
        return self.coeffs


@dataclass(frozen=True)
class TaylorExp:
    """``exp(x)`` truncated after the ``x**K`` term."""

    K: int = DEFAULT_TAYLOR_TERMS

    def __post_init__(self) -> None:
        _check_nonnegative("K", self.K)

    def coefficients(self) -> Tuple[float, ...]:
        return tuple(1.0 / math.factorial(i) for i in range(self.K + 1))


@dataclass(frozen=True)
class TaylorSin:
    """``sin(x)`` truncated after the ``x**K`` term."""

    K: int = DEFAULT_TAYLOR_TERMS

    def __post_init__(self) -> None:
        _check_nonnegative("K", self.K)

    def coefficients(self) -> Tuple[float, ...]:
        return tuple(
            0.0 if i % 2 == 0 else (-1.0) ** (i // 2) / math.factorial(i)
            for i in range(self.K + 1)
        )


@dataclass(frozen=True)
class TaylorCos:
    """``cos(x)`` truncated after the ``x**K`` term."""

    K: int = DEFAULT_TAYLOR_TERMS

    def __post_init__(self) -> None:
        _check_nonnegative("K", self.K)

    def coefficients(self) -> Tuple[float, ...]:
        return tuple(
            0.0 if i % 2 else (-1.0) ** (i // 2) / math.factorial(i)
            for i in range(self.K + 1)
        )


FunctionDescriptor = Union[Power, Polynomial, TaylorExp, TaylorSin, TaylorCos]
TAYLOR_KINDS = (TaylorExp, TaylorSin, TaylorCos)


def _power_by_squaring(t, m: int):
    result = None
    base = t
    while m:
        if m & 1:
            result = base if result is None else result * base
        m >>= 1
        if m:
            base = base * base
    return result


def evaluate_function(f: FunctionDescriptor, t):
    """Evaluate *f* at a scalar or a :class:`numpy.ndarray` *t*.

    Powers use repeated squaring, everything else Horner's rule.
    """
    if isinstance(f, Power):
        if f.m == 0:
            return np.ones_like(t) if isinstance(t, np.ndarray) else 1.0
        return _power_by_squaring(t, f.m)

    coeffs = f.coefficients()
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * t + c
    if isinstance(t, np.ndarray) and not isinstance(acc, np.ndarray):
        acc = np.full_like(t, acc)
    return acc


_TAYLOR_NAMES = {"taylor-exp": TaylorExp, "taylor-sin": TaylorSin, "taylor-cos": TaylorCos}


def parse_function(spec: str) -> FunctionDescriptor:
    """Parse ``power:M``, ``poly:c0,c1,...`` or ``taylor-{exp,sin,cos}[:K]``."""
    kind, _, arg = spec.strip().partition(":")
    kind = kind.lower()
    if kind == "power":
        return Power(int(arg))
    if kind in ("poly", "polynomial"):
        return Polynomial([float(c) for c in arg.split(",") if c.strip()])
    if kind in _TAYLOR_NAMES:
        return _TAYLOR_NAMES[kind](int(arg) if arg else DEFAULT_TAYLOR_TERMS)
    raise ValueError(f"unknown function spec: {spec!r}")
