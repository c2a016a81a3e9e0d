"""Bounded test functions applied to rescaled overshoots.

The workhorse family is f_beta(x) = min(|x|^-beta, 1), bounded by 1 and
equal to 1 on [-1, 1].  For the symmetric stable limit law their expectation
at the exit value has the closed Gamma-ratio form, so oracles special-case
instances of :class:`PowerCap`.  User-supplied functions must come wrapped
in :class:`BoundedFunction` with an explicit bound declaration.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class PowerCap:
    """f(x) = min(|x|^-beta, 1) for beta >= 0; f(x) = 1 when beta = 0."""

    beta: float

    def __post_init__(self):
        if self.beta < 0:
            raise ParameterError(f"beta must be >= 0, got {self.beta}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.beta == 0.0:
            return np.ones_like(x)
        with np.errstate(divide="ignore"):
            return np.minimum(np.abs(x) ** (-self.beta), 1.0)

    @property
    def bound(self) -> float:
        return 1.0

    @property
    def label(self) -> str:
        return "one" if self.beta == 0.0 else f"pow{self.beta:g}"


@dataclass(frozen=True)
class BoundedFunction:
    """A user-supplied function with a declared sup-norm bound.

    The declaration is trusted, not proven; oracles and estimators only
    require that |fn(x)| <= bound for |x| >= 1.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    bound: float
    label: str = "custom"

    def __post_init__(self):
        if not self.bound > 0:
            raise ParameterError("bound must be positive")

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


ONE = PowerCap(0.0)
INVERSE_SQUARE_CAP = PowerCap(2.0)

# The paper-worked family beta in {0, 1, 2, 3}.
STANDARD_FUNCTIONALS = (PowerCap(0.0), PowerCap(1.0), PowerCap(2.0), PowerCap(3.0))


def as_functional(f) -> "PowerCap | BoundedFunction":
    """Coerce f to a declared-bounded functional.

    Accepts PowerCap / BoundedFunction (returned as-is), a nonnegative
    number beta (PowerCap), or the string labels used by the CLI.
    """
    if isinstance(f, (PowerCap, BoundedFunction)):
        return f
    if isinstance(f, (int, float)):
        return PowerCap(float(f))
    if isinstance(f, str):
        if f == "one":
            return ONE
        if f.startswith("pow"):
            return PowerCap(float(f[3:]))
        raise ParameterError(f"unknown functional label {f!r}")
    raise ParameterError(
        "plain callables must be wrapped in BoundedFunction with a bound declaration"
    )
