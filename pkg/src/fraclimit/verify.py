"""The identity battery run by ``fraclimit verify``.

Each check returns a :class:`CheckResult` with the worst deviation it saw.
Exact identities are measured in relative error; asymptotic ones by
``|brute / asymptotic - 1|`` at the largest ``N`` (or ``m``).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional

from . import charpoly, identities, specfun

__all__ = [
    "CheckResult",
    "CHECKS",
    "SAMPLED_ORDERS",
    "asymptotic_tolerance",
    "run_checks",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    tolerance: float

    def format(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{self.name:<18} {status}  max_dev={self.max_deviation:.3e}"
            f"  tol={self.tolerance:.0e}"
        )


#: 20 non-integer orders in (0, 3): (2i + 1) / 14
SAMPLED_ORDERS = tuple(Fraction(2 * i + 1, 14) for i in range(20))
ASYMPTOTIC_ORDERS = (0.25, 0.5, 1.5)


def asymptotic_tolerance(max_n: int) -> float:
    """1% at ``N >= 1e4``, relaxed to 5% for smaller reduced runs."""
    return 0.01 if max_n >= 10**4 else 0.05


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


def _result(name: str, deviations: Iterable[float], tol: float) -> CheckResult:
    worst = max(deviations, default=0.0)
    return CheckResult(name, worst <= tol, worst, tol)


def check_result1(max_n: int) -> CheckResult:
    n_max = min(200, max_n)
    devs = (
        _rel(identities.pascal_sum_brute(R, N), identities.pascal_closed(R, N))
        for R in (0.3, -0.3, 0.5, 1.7)
        for N in range(n_max + 1)
    )
    return _result("result1", devs, 1e-11)


def check_result2(max_n: int) -> CheckResult:
    devs = (
        _rel(R * identities.result2_lhs(m, R, q), specfun.hyp2f1_terminating(m, R, q))
        for m in (1, 3, 5)
        for R in (0.25, 0.5, 1.5)
        for q in (-0.5, 0.7, 1.0)
    )
    return _result("result2", devs, 1e-12)


def check_result3(max_n: int) -> CheckResult:
    devs = (
        _rel(identities.result2_lhs(m, float(R), 1.0), identities.result3_closed(m, float(R)))
        for m in range(9)
        for R in SAMPLED_ORDERS
        if not (R.denominator == 1 and R <= m)
    )
    return _result("result3", devs, 1e-12)


def check_result4(max_n: int) -> CheckResult:
    devs = []
    for i in range(-500, 501):
        if i % 100 == 0:
            continue
        R = i / 100
        lhs = specfun.gamma(1.0 + R) * specfun.gamma(1.0 - R)
        devs.append(_rel(lhs, specfun.reflection_rhs(R)))
    return _result("result4", devs, 1e-12)


def check_result5(max_n: int) -> CheckResult:
    N = max_n
    devs = []
    for R in ASYMPTOTIC_ORDERS:
        brute = identities.alternating_binomials(R, N)[-1]
        devs.append(abs(brute / identities.asymptotic_pascal(R, N) - 1.0))
    return _result("result5", devs, asymptotic_tolerance(max_n))


def check_result6(max_n: int) -> CheckResult:
    m = max_n
    devs = [
        abs(specfun.binomial_real_real(m, R) / identities.asymptotic_binom_upper(m, R) - 1.0)
        for R in ASYMPTOTIC_ORDERS
    ]
    return _result("result6", devs, asymptotic_tolerance(max_n))


def check_lemma7(max_n: int) -> CheckResult:
    N = max_n
    devs = [
        abs(
            identities.moment_sum_brute(R, N, j)
            / identities.moment_closed_asymptotic(R, N, j)
            - 1.0
        )
        for R in ASYMPTOTIC_ORDERS
        for j in (1, 2, 3)
        if R != j
    ]
    return _result("lemma7", devs, asymptotic_tolerance(max_n))


def check_q1_universality(max_n: int) -> CheckResult:
    devs = [abs(charpoly.char_linear_residual(1.0, R)) for R in SAMPLED_ORDERS]
    devs += [
        abs(charpoly.char_power_residual_hyp(1.0, R, m))
        for m in range(9)
        for R in SAMPLED_ORDERS
    ]
    return _result("q1-universality", devs, 1e-10)


def check_form_equivalence(max_n: int) -> CheckResult:
    devs = []
    for m in (1, 3, 5):
        for R in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 2)):
            for q in (-0.5, 0.5, 1.0, 2.0):
                if q < 0 and R.denominator % 2 == 0:
                    continue
                hyp = charpoly.char_power_residual_hyp(q, R, m)
                summed = charpoly.char_power_residual_sum(q, R, m)
                devs.append(abs(hyp - float(R) * summed) / max(1.0, abs(hyp)))
    return _result("form-equivalence", devs, 1e-11)


CHECKS: Dict[str, Callable[[int], CheckResult]] = {
    "result1": check_result1,
    "result2": check_result2,
    "result3": check_result3,
    "result4": check_result4,
    "result5": check_result5,
    "result6": check_result6,
    "lemma7": check_lemma7,
    "q1-universality": check_q1_universality,
    "form-equivalence": check_form_equivalence,
}


def run_checks(only: Optional[Iterable[str]] = None, max_n: int = 10**4) -> List[CheckResult]:
    names = list(CHECKS) if not only else list(only)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    return [CHECKS[n](max_n) for n in names]
