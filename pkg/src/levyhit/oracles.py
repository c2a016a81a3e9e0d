"""Exit-time and overshoot oracles for the limiting processes.

Closed forms where they exist, quadrature for overshoot functionals of the
symmetric stable limit, and a Monte Carlo oracle (exact stable increments
with time stepping) for everything else: higher exit-time moments, joint
(exit time, overshoot) functionals and the limit covariance matrix feeding
the central limit theorem.

Normalization.  A stable limit with Levy density c/|x|^(1+alpha) on each
side runs at time-scale factor k(alpha, c) relative to the unit-scale
process with characteristic exponent -|u|^alpha (see stable_scale_unit);
its mean exit time from (-1,1) is

    E[tau*] = sqrt(pi) / (2^alpha Gamma(1+alpha/2) Gamma((1+alpha)/2))
              / k(alpha, c)  =  sin(pi alpha / 2) / (pi c),

the classical Getoor value transported by selfsimilarity.  The widely
quoted shorter expression sqrt(pi)/(2^alpha Gamma(1+alpha/2)) — exposed
here as :func:`etau_formula` — omits the Gamma((1+alpha)/2) factor and the
measure-to-unit-scale constant; all three coincide at alpha = 1, where the
unit-scale Cauchy process (c = 1/pi) has mean exit time exactly 1.  The MC
oracle arbitrates: every closed form below is reproduced by simulation in
the test suite.  Overshoot laws carry no time normalization and are used
as printed.
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import special

from . import rng as rngmod
from .errors import ParameterError, UnsupportedLawError
from .functionals import ONE, PowerCap, as_functional
from .models import (
    BrownianLimit,
    DriftLimit,
    LimitClassification,
    StableLimit,
)
from .numerics import quad_checked
from .simulate import _stable_exit_batch, stable_scale_unit

_DEFAULT_CHUNK = 1 << 15


@dataclass(frozen=True)
class LimitLaw:
    """A classified limit process together with quadrature settings."""

    classification: LimitClassification
    quadrature_tol: float = 1e-10

    def __post_init__(self):
        if self.quadrature_tol <= 0:
            raise ParameterError("quadrature_tol must be positive")

    @property
    def limit(self):
        return self.classification.limit

    @property
    def alpha(self) -> float:
        return self.classification.alpha


def limit_law(limit, quadrature_tol: float = 1e-10) -> LimitLaw:
    """Wrap a bare limit object, inferring its condition index."""
    if isinstance(limit, LimitLaw):
        return limit
    if isinstance(limit, LimitClassification):
        return LimitLaw(limit, quadrature_tol)
    if isinstance(limit, BrownianLimit):
        cls = LimitClassification(1, 2.0, limit)
    elif isinstance(limit, DriftLimit):
        cls = LimitClassification(2, 1.0, limit)
    elif isinstance(limit, StableLimit):
        cond = 3 if limit.alpha > 1 else (4 if limit.alpha == 1.0 else 5)
        cls = LimitClassification(cond, limit.alpha, limit)
    else:
        raise ParameterError(f"not a limit object: {limit!r}")
    return LimitLaw(cls, quadrature_tol)


def standard_symmetric_stable(alpha: float, quadrature_tol: float = 1e-10) -> LimitLaw:
    """The unit-scale symmetric stable law (characteristic exponent -|u|^alpha).

    Its per-side Levy coefficient is 1/k(alpha); at alpha = 1 this is the
    standard Cauchy process with mean exit time 1 from (-1,1).
    """
    c = 1.0 / stable_scale_unit(alpha, 1.0, 1.0)
    return limit_law(StableLimit(alpha, c, c), quadrature_tol)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def etau_formula(alpha: float) -> float:
    """The printed mean-exit-time expression sqrt(pi)/(2^a Gamma(1+a/2)).

    Exact for the unit-scale symmetric stable process at alpha = 1 (value 1);
    for other alpha it misses the Gamma((1+alpha)/2) factor of the classical
    result, so quantitative oracles use :func:`expected_exit_time` instead.
    """
    if not 0.0 < alpha < 2.0:
        raise ParameterError("alpha must be in (0,2)")
    return math.sqrt(math.pi) / (2.0**alpha * special.gamma(1.0 + alpha / 2.0))


def _getoor_unit_exit_time(alpha: float) -> float:
    """Mean exit time from (-1,1) of the unit-scale symmetric stable process."""
    return math.sqrt(math.pi) / (
        2.0**alpha * special.gamma(1.0 + alpha / 2.0) * special.gamma((1.0 + alpha) / 2.0)
    )


def _symmetric_stable_or_raise(law: LimitLaw) -> StableLimit:
    lim = law.limit
    if not isinstance(lim, StableLimit):
        raise UnsupportedLawError(f"not a stable limit: {type(lim).__name__}")
    if not lim.symmetric:
        raise UnsupportedLawError(
            "closed forms cover the symmetric stable case only; use the MC oracle"
        )
    if lim.alpha == 1.0 and abs(lim.gamma_star) > 1e-12:
        raise UnsupportedLawError(
            "Cauchy limit with drift has no closed forms; use the MC oracle"
        )
    return lim


def expected_exit_time(law) -> float:
    """E[tau*], the mean exit time of the limit process from (-1,1).

    Brownian limit: 1/A (the value the MC oracle confirms; the balance
    (A/2) u'' + 1 = 0 gives u(x) = (1-x^2)/A).  Drift limit: 1/|gamma_0|.
    Symmetric stable: the Getoor value scaled by the law's time factor.
    Asymmetric stable limits raise UnsupportedLawError (MC oracle applies).
    """
    law = limit_law(law)
    lim = law.limit
    if isinstance(lim, BrownianLimit):
        return 1.0 / lim.variance
    if isinstance(lim, DriftLimit):
        return 1.0 / abs(lim.gamma0)
    lim = _symmetric_stable_or_raise(law)
    return _getoor_unit_exit_time(lim.alpha) / stable_scale_unit(
        lim.alpha, lim.c_plus, lim.c_minus
    )


def overshoot_density(law, y):
    """Density of the exit value X* at tau* for the symmetric stable limit.

    mu(y) = (1/pi) sin(pi alpha/2) |y|^-1 (y^2-1)^(-alpha/2) on |y| >= 1,
    zero inside the interval; independent of the law's time normalization.
    """
    law = limit_law(law)
    lim = _symmetric_stable_or_raise(law)
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    mask = np.abs(y) >= 1.0
    with np.errstate(divide="ignore"):
        vals = (
            math.sin(math.pi * lim.alpha / 2.0)
            / math.pi
            / np.abs(y[mask])
            * (y[mask] ** 2 - 1.0) ** (-lim.alpha / 2.0)
        )
    out[mask] = vals
    return float(out) if out.ndim == 0 else out


def expected_overshoot_functional(law, f) -> float:
    """E[f(X* at tau*)] for a declared-bounded f.

    Point masses for the Brownian ((f(1)+f(-1))/2) and drift (f(sgn gamma_0))
    limits; the Gamma-ratio closed form for f = |x|^-beta ^ 1 under the
    symmetric stable limit; otherwise adaptive quadrature of f mu with the
    secant substitution soaking up the (y^2-1)^(-alpha/2) boundary
    singularity.
    """
    law = limit_law(law)
    f = as_functional(f)
    lim = law.limit
    if isinstance(lim, BrownianLimit):
        return 0.5 * float(f(1.0) + f(-1.0))
    if isinstance(lim, DriftLimit):
        return float(f(math.copysign(1.0, lim.gamma0)))
    lim = _symmetric_stable_or_raise(law)
    alpha = lim.alpha
    if isinstance(f, PowerCap):
        return float(
            special.gamma(alpha / 2.0 + f.beta / 2.0)
            / (special.gamma(alpha / 2.0) * special.gamma(1.0 + f.beta / 2.0))
        )

    def integrand(u):
        y = 1.0 / np.cos(u)
        return (f(y) + f(-y)) * np.tan(u) ** (1.0 - alpha)

    scale = math.sin(math.pi * alpha / 2.0) / math.pi
    return scale * quad_checked(integrand, 0.0, math.pi / 2.0, law.quadrature_tol)


def m_of_f(law, f, n_paths: Optional[int] = None, seed: int = 0):
    """m(f) = E[f(X* at tau*)] / E[tau*], with its standard error.

    Closed-form constituents give standard error 0; when only the MC oracle
    applies (asymmetric or drifting stable limits), pass n_paths and the
    delta-method error of the sample ratio is returned.
    """
    law = limit_law(law)
    try:
        num = expected_overshoot_functional(law, f)
        den = expected_exit_time(law)
        return num / den, 0.0
    except UnsupportedLawError:
        if n_paths is None:
            raise
    f = as_functional(f)
    tau, xv = sample_limit_exit(law, n_paths, seed)
    fx = f(xv)
    num, den = float(np.mean(fx)), float(np.mean(tau))
    m = num / den
    cov = np.cov(np.vstack([fx, tau]), ddof=1)
    var_m = (
        cov[0, 0] / den**2
        + num**2 * cov[1, 1] / den**4
        - 2.0 * num * cov[0, 1] / den**3
    ) / len(tau)
    return m, math.sqrt(max(var_m, 0.0))


# ---------------------------------------------------------------------------
# the Monte Carlo oracle
# ---------------------------------------------------------------------------


def _brownian_exit_fixed(variance: float, n: int, rng: np.random.Generator,
                         step_frac: float = 1e-3, bridge: bool = True):
    """Exit of Brownian motion (variance A) from (-1,1), fixed-step scheme.

    Independent of the path-simulation core: constant dt with a bridge
    crossing correction; exit values are exactly +-1 (continuous process).
    """
    dt = step_frac / variance  # step_frac x E[tau]
    sd = math.sqrt(variance * dt)
    x = np.zeros(n)
    tt = np.zeros(n)
    out_t = np.empty(n)
    out_x = np.empty(n)
    active = np.arange(n)
    while active.size:
        x0 = x[active]
        x1 = x0 + sd * rng.standard_normal(active.size)
        tt[active] += dt
        exited = np.abs(x1) >= 1.0
        val = np.where(x1 >= 1.0, 1.0, -1.0)
        if bridge:
            inside = ~exited
            if np.any(inside):
                a, b = x0[inside], x1[inside]
                p_up = np.exp(-2.0 * (1.0 - a) * (1.0 - b) / (variance * dt))
                p_dn = np.exp(-2.0 * (1.0 + a) * (1.0 + b) / (variance * dt))
                u = rng.random(a.size)
                crossed = u < p_up + p_dn
                val_in = np.where(u < p_up, 1.0, -1.0)
                sub = np.zeros(active.size, dtype=bool)
                sub[inside] = crossed
                valfull = val.copy()
                valfull[inside] = np.where(crossed, val_in, 0.0)
                exited = exited | sub
                val = valfull
        ids = active[exited]
        out_t[ids] = tt[ids]
        out_x[ids] = val[exited]
        x[active] = x1
        active = active[~exited]
    return out_t, out_x


def sample_limit_exit(law, n: int, seed: int = 0, stepping: str = "adaptive",
                      step_frac: float = 1e-3, chunk: int = _DEFAULT_CHUNK):
    """n draws of (tau*, X* at tau*) from the limit law.

    Deterministic in (seed, n): paths are generated in fixed-size chunks,
    chunk i from the oracle substream (seed, purpose=oracle, replicate=i),
    so results do not depend on how chunks are distributed over workers.
    """
    law = limit_law(law)
    lim = law.limit
    if isinstance(lim, DriftLimit):
        tau = np.full(n, 1.0 / abs(lim.gamma0))
        return tau, np.full(n, math.copysign(1.0, lim.gamma0))

    taus, xs = [], []
    done = 0
    idx = 0
    while done < n:
        m = min(chunk, n - done)
        rng = rngmod.stream(seed, rngmod.PURPOSE_ORACLE, idx)
        if isinstance(lim, BrownianLimit):
            t_c, x_c = _brownian_exit_fixed(lim.variance, m, rng, step_frac)
        else:
            drift = lim.gamma_star if lim.alpha == 1.0 else 0.0
            t_c, x_c = _stable_exit_batch(
                lim.alpha, lim.c_plus, lim.c_minus, drift, m, rng,
                step_frac=step_frac, adaptive=(stepping == "adaptive"),
            )
        taus.append(t_c)
        xs.append(x_c)
        done += m
        idx += 1
    return np.concatenate(taus), np.concatenate(xs)


def mc_exit_moments(law, k: int = 1, f=ONE, n_paths: int = 10**5, seed: int = 0,
                    stepping: str = "adaptive", step_frac: float = 1e-3):
    """Unbiased MC estimate of E[(tau*)^k f(X* at tau*)] with its SE."""
    if k < 1:
        raise ParameterError("k must be >= 1")
    if n_paths < 1000:
        raise ParameterError("n_paths must be >= 1000")
    law = limit_law(law)
    f = as_functional(f)
    tau, xv = sample_limit_exit(law, n_paths, seed, stepping, step_frac)
    vals = tau**k * f(xv)
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(n_paths))


def covariance_C(law, f_list: Sequence, n_paths: int = 10**5, seed: int = 0,
                 stepping: str = "adaptive", step_frac: float = 1e-3,
                 n_batches: int = 50):
    """Limit covariance C[j,k] = Cov(f_j(X*) - m(f_j) tau*, f_k(X*) - m(f_k) tau*).

    m(f_j) is computed first (closed form, or an independent MC substream
    when no closed form exists); the matrix is the sample covariance of the
    centered vector, PSD by construction, with batch-means standard errors.
    """
    law = limit_law(law)
    fs = [as_functional(f) for f in f_list]
    if isinstance(law.limit, DriftLimit):
        d = len(fs)
        return np.zeros((d, d)), np.zeros((d, d))
    ms = [m_of_f(law, f, n_paths=n_paths, seed=seed + 1)[0] for f in fs]
    tau, xv = sample_limit_exit(law, n_paths, seed, stepping, step_frac)
    xi = np.vstack([f(xv) - m * tau for f, m in zip(fs, ms)])
    cov = np.atleast_2d(np.cov(xi, ddof=1))

    bounds = np.linspace(0, n_paths, n_batches + 1, dtype=int)
    batches = np.stack([
        np.atleast_2d(np.cov(xi[:, a:b], ddof=1))
        for a, b in zip(bounds[:-1], bounds[1:])
    ])
    se = np.std(batches, axis=0, ddof=1) / math.sqrt(n_batches)
    return cov, se
