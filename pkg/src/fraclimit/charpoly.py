"""Characteristic equations for the coupling constant ``q = N h / x``.

For ``f(x) = x`` the admissible couplings are the real roots of

    q^R - R q + (R - 1) = 0,

and for ``f(x) = x^m`` of either of the equivalent forms

    q^-R sum_j C(m,j) (-q)^j / (R - j) = pi / sin(pi R) C(m, R)
    q^-R 2F1(-m, -R; 1 - R; q)         = pi R / sin(pi R) C(m, R).

``q = 1`` solves all of them. Negative roots are only reachable when ``R``
has an odd denominator, so ``q^R`` has a real branch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from .errors import ParameterError
from .gl_engine import Handedness
from .identities import result2_lhs, result3_closed
from .specfun import (
    Rational,
    RationalLike,
    as_rational,
    binomial_real_real,
    hyp2f1_terminating,
    real_branch_power,
    reflection_rhs,
    sinpi,
)

__all__ = [
    "ROOT_TOL",
    "DEDUP_RADIUS",
    "DEFAULT_SEARCH",
    "DEFAULT_GRID_POINTS",
    "POSITIVE_FLOOR",
    "NOTE_POSITIVE",
    "NOTE_ODD_DENOMINATOR",
    "NOTE_INTEGER_LIMIT",
    "CharacteristicRoot",
    "RootSearch",
    "char_linear_residual",
    "char_power_residual_sum",
    "char_power_residual_hyp",
    "residual_function",
    "find_roots",
    "verify_q1_identity",
]

ROOT_TOL = 1e-10
DEDUP_RADIUS = 1e-8
DEFAULT_SEARCH = (-64.0, 64.0)
DEFAULT_GRID_POINTS = 2**16
#: the positive sub-interval opens here, away from the q^-R singularity
POSITIVE_FLOOR = 1e-6
_BISECT_WIDTH = 1e-13
# two refined roots closer than this are merged if the residual stays below
# ROOT_TOL between them (a flat multiple root such as q = 1)
_FLAT_MERGE_RADIUS = 1e-3

NOTE_POSITIVE = "positive-axis"
NOTE_ODD_DENOMINATOR = "real-branch-odd-denominator"
NOTE_INTEGER_LIMIT = "integer-order-limit"


@dataclass(frozen=True)
class CharacteristicRoot:
    q: float
    residual: float
    handedness: Handedness
    branch_note: str
    #: set only for the ``R = 1, q = 0`` order-of-limits case
    integer_limit: bool = False


@dataclass(frozen=True)
class RootSearch:
    """Roots found by :func:`find_roots` together with scan diagnostics."""

    roots: List[CharacteristicRoot]
    notes: List[str]

    def __iter__(self):
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    @property
    def q_values(self) -> List[float]:
        return [r.q for r in self.roots]


def _require_noninteger(R: Rational) -> None:
    if R.denominator == 1:
        raise ParameterError(f"characteristic equation needs non-integer R, got {R}")


def char_linear_residual(q: float, R: RationalLike) -> float:
    """``q^R - R q + (R - 1)`` with ``q^R`` on the real branch."""
    R = as_rational(R)
    r = float(R)
    return real_branch_power(q, R) - r * q + (r - 1.0)


def char_power_residual_sum(q: float, R: RationalLike, m: int) -> float:
    """Finite-sum form: ``q^-R sum_j C(m,j)(-q)^j/(R-j) - pi/sin(pi R) C(m,R)``."""
    R = as_rational(R)
    _require_noninteger(R)
    if q == 0.0:
        raise ParameterError("q = 0 is a singular point of the power-function form")
    r = float(R)
    lhs = real_branch_power(q, -R) * result2_lhs(m, r, q)
    return lhs - math.pi / sinpi(r) * binomial_real_real(m, r)


def char_power_residual_hyp(q: float, R: RationalLike, m: int) -> float:
    """Hypergeometric form: ``q^-R 2F1(-m,-R;1-R;q) - pi R/sin(pi R) C(m,R)``."""
    R = as_rational(R)
    _require_noninteger(R)
    if q == 0.0:
        raise ParameterError("q = 0 is a singular point of the power-function form")
    r = float(R)
    lhs = real_branch_power(q, -R) * hyp2f1_terminating(m, r, q)
    return lhs - reflection_rhs(r) * binomial_real_real(m, r)


def residual_function(R: RationalLike, m: int) -> Callable[[float], float]:
    """Residual used by the root search: linear form for ``m = 1``, else 2F1."""
    R = as_rational(R)
    if m == 1:
        return lambda q: char_linear_residual(q, R)
    return lambda q: char_power_residual_hyp(q, R, m)


def _bisect(fn: Callable[[float], float], a: float, b: float, fa: float) -> float:
    # fa and fn(b) have opposite signs
    while abs(b - a) > _BISECT_WIDTH * max(1.0, abs(a), abs(b)):
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fa > 0.0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)


def _scan(fn: Callable[[float], float], lo: float, hi: float, n: int) -> List[float]:
    """Sign-change brackets of *fn* on ``n`` uniform points of ``[lo, hi]``."""
    if n < 2 or hi <= lo:
        return []
    qs = np.linspace(lo, hi, n).tolist()
    values = [fn(q) for q in qs]

    candidates = []
    last_q, last_v = None, None
    for q, v in zip(qs, values):
        if v == 0.0:
            candidates.append(q)
            continue
        if last_v is not None and (last_v > 0.0) != (v > 0.0):
            candidates.append(_bisect(fn, last_q, q, last_v))
        last_q, last_v = q, v
    return candidates


def _same_root(fn: Callable[[float], float], a: float, b: float) -> bool:
    if abs(a - b) <= DEDUP_RADIUS:
        return True
    if abs(a - b) > _FLAT_MERGE_RADIUS:
        return False
    return all(abs(fn(a + (b - a) * t)) <= ROOT_TOL for t in np.linspace(0.0, 1.0, 9))


def find_roots(
    R: RationalLike,
    m: int = 1,
    search: Tuple[float, float] = DEFAULT_SEARCH,
    grid_points: int = DEFAULT_GRID_POINTS,
) -> RootSearch:
    """Enumerate real characteristic roots ``q`` on *search*.

    The interval is split at 0 into a negative part (scanned only for
    odd-denominator *R*) and a positive part starting at ``1e-6``. Sign
    changes on a uniform grid are refined by bisection; ``q = 1`` is always
    checked explicitly because it is usually a multiple (tangent) root that a
    sign scan cannot see.

    For ``R = 1`` and ``m = 1`` the equation holds for every ``q``; the
    order-of-limits answer ``q = 0`` (take ``N -> oo`` first) is returned as a
    single flagged root.
    """
    R = as_rational(R)
    lo, hi = float(search[0]), float(search[1])
    if hi <= lo:
        raise ValueError(f"empty search interval {search}")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")

    if R.denominator == 1:
        if R == 1 and m == 1:
            root = CharacteristicRoot(
                0.0, 0.0, Handedness.Forward, NOTE_INTEGER_LIMIT, integer_limit=True
            )
            return RootSearch([root], ["integer order: classical limit N -> oo first"])
        raise ParameterError(f"characteristic roots need non-integer R, got {R}")

    fn = residual_function(R, m)
    notes = []

    neg = (lo, min(hi, -POSITIVE_FLOOR))
    pos = (max(lo, POSITIVE_FLOOR), hi)
    neg_len = max(0.0, neg[1] - neg[0])
    pos_len = max(0.0, pos[1] - pos[0])
    total = neg_len + pos_len
    n_neg = int(round(grid_points * neg_len / total)) if total > 0 else 0
    n_pos = grid_points - n_neg

    candidates: List[float] = []
    if neg_len > 0:
        if R.odd_denominator:
            candidates.extend(_scan(fn, neg[0], neg[1], n_neg))
        else:
            notes.append(f"negative axis skipped: R = {R} has an even denominator")
    if pos_len > 0:
        candidates.extend(_scan(fn, pos[0], pos[1], n_pos))

    # q = 1 first so it wins any merge with nearby bisection results
    ordered = []
    if lo <= 1.0 <= hi and abs(fn(1.0)) <= ROOT_TOL:
        ordered.append(1.0)
    ordered.extend(candidates)

    kept: List[float] = []
    for q in ordered:
        if abs(fn(q)) > ROOT_TOL:
            notes.append(f"rejected bracket at q = {q!r} (residual {fn(q):.3e})")
            continue
        if any(_same_root(fn, q, k) for k in kept):
            continue
        kept.append(q)

    roots = [
        CharacteristicRoot(
            q=q,
            residual=fn(q),
            handedness=Handedness.from_coupling(q),
            branch_note=NOTE_ODD_DENOMINATOR if q < 0 else NOTE_POSITIVE,
        )
        for q in sorted(kept)
    ]
    return RootSearch(roots, notes)


def verify_q1_identity(m: int, R: RationalLike) -> float:
    """Gap between the two sides of the ``q = 1`` identity, both computed here.

    Checks ``C(m - R, m)^-1 == pi R / sin(pi R) C(m, R)``, i.e. that the
    2F1 form of the power-function equation vanishes at ``q = 1``.
    """
    R = as_rational(R)
    _require_noninteger(R)
    r = float(R)
    lhs = r * result3_closed(m, r)
    rhs = reflection_rhs(r) * binomial_real_real(m, r)
    return abs(lhs - rhs)
