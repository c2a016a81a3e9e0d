"""Estimators built on barrier-crossing counts.

Everything derives from the cumulative functional

    V(f)_t = sum over observation times T_i <= t of f(increment_i),

where increment_i is the rescaled step (Y_{T_i} - Y_{T_{i-1}})/eps.  The
law of large numbers eps^alpha V(f)_t -> m(f) S_t makes V(1) a time-change
estimator and the ratio 2 V(f_2)/V(1), f_2(x) = x^-2 ^ 1, a consistent
estimator of the jump-activity index alpha.  The ratio needs neither alpha
nor the eps-scaling, so it applies to ingested real data directly.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySeriesError, ParameterError
from .functionals import INVERSE_SQUARE_CAP, ONE, as_functional
from .models import LimitClassification
from .oracles import expected_exit_time, limit_law, m_of_f
from .simulate import ObservationSeries


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous piecewise-constant function jumping at observation times."""

    times: np.ndarray
    values: np.ndarray
    initial: float = 0.0

    def __post_init__(self):
        if len(self.times) != len(self.values):
            raise ParameterError("times and values must align")
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise ParameterError("jump times must be strictly increasing")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.searchsorted(self.times, t, side="right")
        padded = np.concatenate([[self.initial], self.values])
        out = padded[idx]
        return float(out) if out.ndim == 0 else out

    def scaled(self, factor: float) -> "StepFunction":
        return StepFunction(self.times, factor * self.values, factor * self.initial)


def v_epsilon(series: ObservationSeries, f) -> StepFunction:
    """V(f)_t = sum_{T_i <= t} f(increment_i); V(1) counts crossings."""
    f = as_functional(f)
    if len(series) == 0:
        return StepFunction(np.empty(0), np.empty(0))
    return StepFunction(series.times, np.cumsum(f(series.increments)))


def estimate_time_change(series: ObservationSeries, cls: LimitClassification,
                         alpha_override: Optional[float] = None) -> StepFunction:
    """Time-change estimator S_hat_t = eps^alpha V(1)_t E[tau*].

    cls supplies the scaling exponent and the limit law whose mean exit time
    calibrates the counting rate.  alpha_override replaces the exponent with
    an estimated value; this plug-in mode is a heuristic (the law, and hence
    E[tau*], still comes from cls) intended for exploratory use only.
    """
    alpha = cls.alpha if alpha_override is None else float(alpha_override)
    etau = expected_exit_time(limit_law(cls))
    counts = v_epsilon(series, ONE)
    return counts.scaled(series.eps**alpha * etau)


def estimate_bg_index(series: ObservationSeries, t: Optional[float] = None) -> float:
    """Jump-activity index estimate alpha_hat = 2 V(f_2)_t / V(1)_t in (0, 2].

    Scale-free: depends only on the rescaled increments up to time t
    (default: the full series horizon).
    """
    if t is None:
        t = series.horizon
    if len(series) == 0:
        raise EmptySeriesError("no crossings: jump-activity index undefined")
    n = float(v_epsilon(series, ONE)(t))
    if n <= 0:
        raise EmptySeriesError(f"no crossings before t={t}")
    return 2.0 * float(v_epsilon(series, INVERSE_SQUARE_CAP)(t)) / n


class NormalizedError:
    """CLT error process R_t[j] = eps^(-alpha/2) (eps^alpha V(f_j)_t - m_j S_t).

    Piecewise constant steps minus a continuous drift; evaluable at any t.
    """

    def __init__(self, steps: Sequence[StepFunction], m_values: Sequence[float],
                 s_true, eps: float, alpha: float):
        self.steps = list(steps)
        self.m_values = [float(m) for m in m_values]
        self.s_true = s_true
        self.eps = float(eps)
        self.alpha = float(alpha)

    def __call__(self, t):
        s_t = np.asarray(self.s_true(t), dtype=float)
        pre = self.eps**self.alpha
        post = self.eps ** (-self.alpha / 2.0)
        rows = [
            post * (pre * np.asarray(v(t), dtype=float) - m * s_t)
            for v, m in zip(self.steps, self.m_values)
        ]
        return np.array(rows)


def normalized_error(series: ObservationSeries, s_true, cls: LimitClassification,
                     f_list: Sequence, m_values: Optional[Sequence[float]] = None
                     ) -> NormalizedError:
    """Build the normalized error process against the known time change.

    s_true is an evaluator t -> S_t (simulation studies supply the realized
    path).  m(f_j) defaults to the closed-form oracle values; pass m_values
    for laws the closed forms do not cover.
    """
    law = limit_law(cls)
    fs = [as_functional(f) for f in f_list]
    if m_values is None:
        m_values = [m_of_f(law, f)[0] for f in fs]
    steps = [v_epsilon(series, f) for f in fs]
    return NormalizedError(steps, m_values, s_true, series.eps, cls.alpha)


def sup_abs_deviation(step: StepFunction, fn, horizon: float,
                      knots=()) -> float:
    """sup over [0, horizon] of |step(t) - fn(t)| for continuous fn.

    The difference is monotone between the step's jumps and fn's own knots
    (fn piecewise linear in the studies), so the sup is attained at jump
    times (from the left and right) or at supplied knots.
    """
    jumps = step.times[step.times <= horizon]
    grid = np.unique(np.concatenate([
        [0.0, horizon], jumps, np.asarray(knots, dtype=float)
    ]))
    grid = grid[(grid >= 0.0) & (grid <= horizon)]
    f_at = np.asarray(fn(grid), dtype=float)
    best = float(np.max(np.abs(np.asarray(step(grid), dtype=float) - f_at))) \
        if grid.size else 0.0
    if jumps.size:
        # left limits at the step's own jumps
        idx = np.searchsorted(step.times, jumps, side="left") - 1
        padded = np.concatenate([[step.initial], step.values])
        left_vals = padded[idx + 1]
        best = max(best, float(np.max(np.abs(left_vals - np.asarray(fn(jumps), dtype=float)))))
    return best
