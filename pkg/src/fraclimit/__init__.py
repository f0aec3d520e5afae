"""Grünwald-Letnikov fractional derivatives as coupled limits ``h = q x / N``.

The truncated GL sum of a polynomial diverges when the step is fixed, but
converges to the Riemann-Liouville value when the step and the truncation
are tied by ``h = q x / N`` with ``q`` a root of the function's
characteristic equation. ``q = 1`` always works.
"""

__version__ = "0.1.0"

from .errors import (
    BranchError,
    DegenerateError,
    FracLimitError,
    ParameterError,
    PoleError,
    SingularError,
    ZeroStepError,
)
from .specfun import Rational, as_rational
from .functions import (
    Polynomial,
    Power,
    TaylorCos,
    TaylorExp,
    TaylorSin,
    evaluate_function,
    parse_function,
)
from .rl_reference import RLValue, rl_polynomial, rl_power, rl_taylor
from .gl_engine import (
    ConvergenceRow,
    CoupledEvalResult,
    Handedness,
    convergence_sweep,
    gl_coupled,
    gl_partial_sum,
)
from .charpoly import (
    CharacteristicRoot,
    char_linear_residual,
    char_power_residual_hyp,
    char_power_residual_sum,
    find_roots,
    verify_q1_identity,
)

__all__ = [
    "BranchError",
    "DegenerateError",
    "FracLimitError",
    "ParameterError",
    "PoleError",
    "SingularError",
    "ZeroStepError",
    "Rational",
    "as_rational",
    "Power",
    "Polynomial",
    "TaylorExp",
    "TaylorSin",
    "TaylorCos",
    "evaluate_function",
    "parse_function",
    "RLValue",
    "rl_power",
    "rl_polynomial",
    "rl_taylor",
    "Handedness",
    "CoupledEvalResult",
    "ConvergenceRow",
    "gl_partial_sum",
    "gl_coupled",
    "convergence_sweep",
    "CharacteristicRoot",
    "char_linear_residual",
    "char_power_residual_sum",
    "char_power_residual_hyp",
    "find_roots",
    "verify_q1_identity",
]
