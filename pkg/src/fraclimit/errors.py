"""Exception hierarchy shared by every module of the package."""


class FracLimitError(ValueError):
    """Base class for numeric-domain errors raised by :mod:`fraclimit`."""


class PoleError(FracLimitError):
    """Gamma function evaluated at (or within 1e-12 of) a non-positive integer."""


class SingularError(FracLimitError):
    """A removable-only formula was evaluated at a genuine singularity."""


class BranchError(FracLimitError):
    """No real branch exists for a power of a negative base."""


class ParameterError(FracLimitError):
    """Parameters collide with a pole of the formula being evaluated."""


class ZeroStepError(FracLimitError):
    """A Grünwald-Letnikov sum was requested with step h = 0."""


class DegenerateError(FracLimitError):
    """The coupling h = q x / N degenerates (x = 0)."""
