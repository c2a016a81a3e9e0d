"""Path simulation: increments, first exits from symmetric barriers, time
changes and full hitting-time observation series.

Exit simulation uses the compound-Poisson-plus-Gaussian decomposition: jumps
above the cut delta are placed at exact exponential times, the remaining
small jumps are replaced by their Gaussian substitute (variance = truncated
second moment), and diffusion legs evolve on a grid whose per-step standard
deviation stays below a fixed fraction of the barrier, refined near the
barriers, with a Brownian-bridge crossing correction.  Strictly stable
driving processes bypass the decomposition: their increments are exact
(Chambers-Mallows-Stuck), so the rescaled process is sampled directly.

All operations draw from explicit numpy Generators; identical streams give
bit-identical output regardless of how work is distributed across workers.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy import special

from . import rng as rngmod
from .errors import (
    BarrierViolationError,
    HorizonExceeded,
    IntensityOverflow,
    MonotonicityError,
    ParameterError,
)
from .models import (
    JumpSpec,
    LevyTriplet,
    StableJumps,
    rescale,
    strict_stable_drift,
)

# ---------------------------------------------------------------------------
# increments
# ---------------------------------------------------------------------------


def stable_scale_unit(alpha: float, c_plus: float, c_minus: float) -> float:
    """sigma^alpha per unit time for the stable law with density c/|x|^(1+a).

    The characteristic exponent is -sigma^alpha |u|^alpha
    (1 - i beta tan(pi alpha/2) sgn u) with sigma^alpha =
    -Gamma(-alpha) cos(pi alpha/2) (c+ + c-) and beta = (c+ - c-)/(c+ + c-).
    At alpha = 1 (symmetric only) the exponent is -pi c |u|.
    """
    if abs(alpha - 1.0) < 1e-9:
        if abs(c_plus - c_minus) > 1e-9 * (c_plus + c_minus):
            raise ParameterError("asymmetric 1-stable laws are not strictly stable")
        return math.pi * 0.5 * (c_plus + c_minus)
    return -special.gamma(-alpha) * math.cos(math.pi * alpha / 2.0) * (c_plus + c_minus)


def stable_increment(
    alpha: float,
    c_plus: float,
    c_minus: float,
    dt,
    rng: np.random.Generator,
    size: Optional[int] = None,
    drift: float = 0.0,
):
    """Exact increments of the strictly stable process over time(s) dt.

    dt may be a scalar or an array (one increment per entry).  For alpha = 1
    only the symmetric case is strictly stable; ``drift`` adds gamma* dt.
    """
    if not 0.0 < alpha < 2.0:
        raise ParameterError(f"alpha must be in (0,2), got {alpha}")
    if c_plus < 0 or c_minus < 0 or c_plus + c_minus <= 0:
        raise ParameterError("need c+ >= 0, c- >= 0, c+ + c- > 0")
    dt_arr = np.asarray(dt, dtype=float)
    if np.any(dt_arr < 0):
        raise ParameterError("dt must be nonnegative")
    scalar = dt_arr.ndim == 0 and size is None
    n = int(np.broadcast_shapes(dt_arr.shape, (size or 1,))[0]) if not scalar else 1
    dt_arr = np.broadcast_to(dt_arr, (n,)).astype(float)

    if abs(alpha - 1.0) < 1e-9:
        if abs(c_plus - c_minus) > 1e-9 * (c_plus + c_minus):
            raise ParameterError(
                "asymmetric 1-stable increments are not strictly stable"
            )
        c = 0.5 * (c_plus + c_minus)
        v = rng.uniform(-np.pi / 2.0, np.pi / 2.0, n)
        out = (np.pi * c * dt_arr) * np.tan(v) + drift * dt_arr
        return float(out[0]) if scalar else out

    beta = (c_plus - c_minus) / (c_plus + c_minus)
    sig_a = stable_scale_unit(alpha, c_plus, c_minus)
    tan_half = math.tan(math.pi * alpha / 2.0)
    b0 = math.atan(beta * tan_half) / alpha
    s0 = (1.0 + beta * beta * tan_half * tan_half) ** (1.0 / (2.0 * alpha))

    v = rng.uniform(-np.pi / 2.0, np.pi / 2.0, n)
    w = rng.exponential(1.0, n)
    av = alpha * (v + b0)
    z = (
        s0
        * np.sin(av)
        / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - av) / w) ** ((1.0 - alpha) / alpha)
    )
    out = (sig_a * dt_arr) ** (1.0 / alpha) * z + drift * dt_arr
    out = np.where(dt_arr == 0.0, 0.0, out)
    return float(out[0]) if scalar else out


def _gaussian_rate(t: LevyTriplet, cut_delta: float) -> float:
    """Variance per unit time of diffusion plus substituted small jumps."""
    return t.A + t.jumps.truncated_variance(cut_delta)


def _drift_rate(t: LevyTriplet, cut_delta: float) -> float:
    """Drift once jumps above cut_delta are taken uncompensated."""
    if t.jumps.is_none():
        return t.gamma
    return t.gamma - t.jumps.h_tail_integral(cut_delta)


def levy_increment(
    t: LevyTriplet,
    dt: float,
    cut_delta: float,
    rng: np.random.Generator,
    size: Optional[int] = None,
    max_jumps_per_step: float = 1e5,
):
    """Increments of X over dt with the small-jump Gaussian substitution.

    drift dt + N(0, (A + sigma^2(cut_delta)) dt) + compound-Poisson jumps of
    intensity nu restricted to |x| > cut_delta, drift adjusted consistently
    with the truncation h.
    """
    if dt < 0:
        raise ParameterError("dt must be nonnegative")
    if cut_delta <= 0:
        raise ParameterError("cut_delta must be positive")
    scalar = size is None
    n = 1 if scalar else int(size)
    if dt == 0.0:
        out = np.zeros(n)
        return float(out[0]) if scalar else out

    lam = t.jumps.tail_mass(cut_delta)
    if lam * dt > max_jumps_per_step:
        raise IntensityOverflow(
            f"expected {lam * dt:.3g} jumps per step exceeds {max_jumps_per_step:g}; "
            "reduce dt or raise cut_delta"
        )
    out = _drift_rate(t, cut_delta) * dt * np.ones(n)
    var = _gaussian_rate(t, cut_delta)
    if var > 0:
        out += math.sqrt(var * dt) * rng.standard_normal(n)
    if lam > 0:
        counts = rng.poisson(lam * dt, n)
        total = int(counts.sum())
        if total:
            jumps = t.jumps.sample_tail(cut_delta, total, rng)
            offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
            sums = np.add.reduceat(jumps, np.minimum(offsets, total - 1))
            out += np.where(counts > 0, sums, 0.0)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# first-exit simulation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepScheme:
    """Grid and substitution parameters for exit simulation.

    All fractions are relative to the barrier half-width: the small-jump cut
    sits at cut_frac x barrier, per-step diffusion sd stays below sd_frac x
    barrier (shrunk by refine_factor within refine_zone x barrier of either
    barrier) and dt never exceeds dt_cap_frac x the exit-time scale.
    """

    cut_frac: float = 0.1
    sd_frac: float = 0.05
    refine_zone: float = 0.2
    refine_factor: float = 4.0
    dt_cap_frac: float = 0.02
    bridge: bool = True
    horizon_factor: float = 1e3

    def __post_init__(self):
        if not (0 < self.cut_frac and 0 < self.sd_frac and 0 < self.dt_cap_frac):
            raise ParameterError("scheme fractions must be positive")


@dataclass(frozen=True)
class HittingRecord:
    """One first-exit event in rescaled units (barrier 1, clock eps^-alpha)."""

    tau: float
    exit_value: float
    crossed_by_jump: bool
    raw_time: float

    def __post_init__(self):
        if abs(self.exit_value) < 1.0 - 1e-9:
            raise ParameterError("exit value must reach the barrier")
        if self.tau < 0:
            raise ParameterError("exit time must be nonnegative")


def _exit_time_scale(A, drift, sigma2, lam2b, barrier) -> float:
    """Crude exit-time scale used only for step caps and horizon guards."""
    scales = []
    if sigma2 > 0:
        scales.append(barrier * barrier / sigma2)
    if drift != 0.0:
        scales.append(barrier / abs(drift))
    if lam2b > 0:
        scales.append(1.0 / lam2b)
    return min(scales) if scales else 1.0


def _ar_exit_batch(t: LevyTriplet, barrier: float, n: int,
                   rng: np.random.Generator, scheme: StepScheme):
    """Exit of X from (-barrier, barrier): compound-Poisson + Gaussian core.

    Returns (exit times, exit values, crossed-by-jump flags) in raw units.
    """
    delta = scheme.cut_frac * barrier
    sigma2 = _gaussian_rate(t, delta)
    drift = _drift_rate(t, delta)
    lam = t.jumps.tail_mass(delta) if not t.jumps.is_none() else 0.0
    t_scale = _exit_time_scale(t.A, drift, sigma2, t.jumps.tail_mass(2 * barrier)
                               if not t.jumps.is_none() else 0.0, barrier)
    t_cap = scheme.horizon_factor * t_scale

    if sigma2 <= 0.0 and lam <= 0.0:
        if drift == 0.0:
            raise HorizonExceeded("degenerate process never exits")
        tau = np.full(n, barrier / abs(drift))
        val = np.full(n, math.copysign(barrier, drift))
        return tau, val, np.zeros(n, dtype=bool)

    x = np.zeros(n)
    tt = np.zeros(n)
    out_t = np.empty(n)
    out_x = np.empty(n)
    out_j = np.zeros(n, dtype=bool)
    next_jump = rng.exponential(1.0 / lam, n) if lam > 0 else np.full(n, np.inf)
    active = np.arange(n)

    if sigma2 > 0:
        dt_far = (scheme.sd_frac * barrier) ** 2 / sigma2
        if drift != 0.0:
            dt_far = min(dt_far, scheme.sd_frac * barrier / abs(drift))
        dt_far = min(dt_far, scheme.dt_cap_frac * t_scale)
        sd = math.sqrt(sigma2)
        while active.size:
            xa = x[active]
            d = barrier - np.abs(xa)
            dt = np.where(d < scheme.refine_zone * barrier,
                          dt_far / scheme.refine_factor, dt_far)
            jump_now = next_jump[active] <= dt
            dt = np.where(jump_now, next_jump[active], dt)

            xn = xa + drift * dt + sd * np.sqrt(dt) * rng.standard_normal(active.size)
            tt[active] += dt
            next_jump[active] -= dt
            exited = np.abs(xn) >= barrier

            if scheme.bridge:
                inside = ~exited
                if np.any(inside):
                    x0, x1 = xa[inside], xn[inside]
                    var = sigma2 * dt[inside]
                    p_up = np.exp(-2.0 * (barrier - x0) * (barrier - x1) / var)
                    p_dn = np.exp(-2.0 * (barrier + x0) * (barrier + x1) / var)
                    u = rng.random(x0.size)
                    crossed = u < p_up + p_dn
                    up = u < p_up
                    xn[inside] = np.where(
                        crossed, np.where(up, barrier, -barrier), x1
                    )
                    exited[inside] = crossed

            # jumps scheduled exactly at this step's end, for survivors
            jm = jump_now & ~exited
            if np.any(jm):
                idx = np.flatnonzero(jm)
                j = t.jumps.sample_tail(delta, idx.size, rng)
                xn[idx] = xn[idx] + j
                next_jump[active[idx]] = rng.exponential(1.0 / lam, idx.size)
                newly = np.abs(xn[idx]) >= barrier
                out_j[active[idx[newly]]] = True
                exited[idx] = newly

            x[active] = xn
            done = exited
            if np.any(done):
                ids = active[done]
                out_t[ids] = tt[ids]
                out_x[ids] = x[ids]
                active = active[~done]
            if np.any(tt[active] > t_cap):
                raise HorizonExceeded(
                    f"no exit before {t_cap:g} (horizon_factor x time scale)"
                )
    else:
        # drift + jumps only: drift legs are handled exactly
        while active.size:
            xa = x[active]
            if drift > 0:
                hit_dt = (barrier - xa) / drift
            elif drift < 0:
                hit_dt = (-barrier - xa) / drift
            else:
                hit_dt = np.full(active.size, np.inf)
            jdt = next_jump[active]
            drift_first = hit_dt <= jdt

            ids = active[drift_first]
            out_t[ids] = tt[ids] + hit_dt[drift_first]
            out_x[ids] = math.copysign(barrier, drift)

            rest = ~drift_first
            idx = active[rest]
            if idx.size:
                dtj = jdt[rest]
                j = t.jumps.sample_tail(delta, idx.size, rng)
                x[idx] = xa[rest] + (drift * dtj if drift != 0.0 else 0.0) + j
                tt[idx] += dtj
                next_jump[idx] = rng.exponential(1.0 / lam, idx.size)
                exited = np.abs(x[idx]) >= barrier
                eids = idx[exited]
                out_t[eids] = tt[eids]
                out_x[eids] = x[eids]
                out_j[eids] = True
                active = idx[~exited]
            else:
                active = idx
            if active.size and np.any(tt[active] > t_cap):
                raise HorizonExceeded(
                    f"no exit before {t_cap:g} (horizon_factor x time scale)"
                )
    return out_t, out_x, out_j


def _stable_exit_batch(alpha: float, c_plus: float, c_minus: float, drift: float,
                       n: int, rng: np.random.Generator,
                       step_frac: float = 1e-3, adaptive: bool = True,
                       max_steps: int = 10**7):
    """Exit from (-1,1) of the strictly stable process via exact increments.

    Steps are refined geometrically near the barriers: dt is proportional to
    (distance to barrier)^alpha so the local move stays comparable to the
    remaining gap.  Returns (tau, exit values).
    """
    etau_scale = math.sqrt(math.pi) / (2.0**alpha * special.gamma(1.0 + alpha / 2.0))
    t_scale = etau_scale * 2.0 / (c_plus + c_minus)
    base_dt = step_frac * t_scale

    x = np.zeros(n)
    tt = np.zeros(n)
    out_t = np.empty(n)
    out_x = np.empty(n)
    active = np.arange(n)
    steps = 0
    while active.size:
        d = 1.0 - np.abs(x[active])
        dt = base_dt * np.minimum(1.0, np.maximum(d, 1e-3) ** alpha) if adaptive \
            else np.full(active.size, base_dt)
        inc = stable_increment(alpha, c_plus, c_minus, dt, rng,
                               size=active.size, drift=drift)
        x[active] += inc
        tt[active] += dt
        done = np.abs(x[active]) >= 1.0
        ids = active[done]
        out_t[ids] = tt[ids]
        out_x[ids] = x[ids]
        active = active[~done]
        steps += 1
        if steps > max_steps:
            raise HorizonExceeded("stable exit sampler exceeded max_steps")
    return out_t, out_x


def _as_strict_stable(t: LevyTriplet):
    """(alpha, c+, c-, extra drift) when the triplet is exactly stable-form."""
    if t.A != 0.0 or not isinstance(t.jumps, StableJumps):
        return None
    j = t.jumps
    if abs(j.alpha - 1.0) < 1e-12:
        if abs(j.c_plus - j.c_minus) > 1e-9 * (j.c_plus + j.c_minus):
            return None
        return (1.0, j.c_plus, j.c_minus, t.gamma)
    extra = t.gamma - strict_stable_drift(j.alpha, j.c_plus, j.c_minus)
    return (j.alpha, j.c_plus, j.c_minus, extra)


def exit_batch_raw(t: LevyTriplet, eps: float, n: int, rng: np.random.Generator,
                   scheme: Optional[StepScheme] = None):
    """Raw-clock exits of X from (-eps, eps): (times, values, by-jump flags).

    Exactly stable driving processes are sampled with exact increments via
    selfsimilarity; everything else goes through the decomposition core.
    """
    if eps <= 0:
        raise ParameterError("eps must be positive")
    scheme = scheme or StepScheme()
    strict = _as_strict_stable(t)
    if strict is not None:
        alpha, cp, cm, extra = strict
        resc = rescale(t, eps, alpha)
        drift1 = resc.gamma if alpha == 1.0 else \
            resc.gamma - strict_stable_drift(alpha, cp, cm)
        tau1, val1 = _stable_exit_batch(alpha, cp, cm, drift1, n, rng)
        return eps**alpha * tau1, eps * val1, np.ones(n, dtype=bool)
    return _ar_exit_batch(t, eps, n, rng, scheme)


def simulate_exit_batch(t: LevyTriplet, eps: float, alpha: float, n: int,
                        rng: np.random.Generator,
                        scheme: Optional[StepScheme] = None):
    """Rescaled exits: (tau^eps, X^eps at exit, by-jump flags).

    Equivalent to simulating the rescaled triplet against the barrier 1;
    implemented on the raw triplet at barrier eps and rescaled, so raw and
    rescaled modes are the same draw for the same stream.
    """
    if not 0.0 < alpha <= 2.0:
        raise ParameterError(f"alpha must be in (0,2], got {alpha}")
    raw_t, raw_x, by_jump = exit_batch_raw(t, eps, n, rng, scheme)
    return raw_t / eps**alpha, raw_x / eps, by_jump


def simulate_exit(t: LevyTriplet, eps: float, alpha: float,
                  rng: Union[int, np.random.Generator],
                  scheme: Optional[StepScheme] = None) -> HittingRecord:
    """Single first-exit event as a HittingRecord."""
    if isinstance(rng, (int, np.integer)):
        rng = rngmod.stream(int(rng), rngmod.PURPOSE_PROCESS)
    tau, val, byj = simulate_exit_batch(t, eps, alpha, 1, rng, scheme)
    return HittingRecord(
        tau=float(tau[0]),
        exit_value=float(val[0]),
        crossed_by_jump=bool(byj[0]),
        raw_time=float(tau[0] * eps**alpha),
    )


# ---------------------------------------------------------------------------
# time changes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearTimeChange:
    """S_t = sigma t."""

    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ParameterError("sigma must be positive")


@dataclass(frozen=True)
class IntegratedCIR:
    """S_t = integral of a CIR variance path, full-truncation Euler scheme."""

    kappa: float
    theta: float
    xi: float
    v0: float

    def __post_init__(self):
        if min(self.kappa, self.theta, self.xi) <= 0 or self.v0 < 0:
            raise ParameterError("CIR parameters must be positive (v0 >= 0)")

    @property
    def feller_satisfied(self) -> bool:
        # violation is allowed (variance can hit zero) but worth surfacing
        return 2.0 * self.kappa * self.theta >= self.xi**2

    def mean_integrated(self, t: float) -> float:
        """E[S_t] under the exact dynamics."""
        k = self.kappa
        return self.theta * t + (self.v0 - self.theta) * (1.0 - math.exp(-k * t)) / k


@dataclass(frozen=True)
class PiecewiseLinearTimeChange:
    """Deterministic S interpolating the given (t, s) knots."""

    knot_times: tuple
    knot_values: tuple

    def __post_init__(self):
        t = np.asarray(self.knot_times, dtype=float)
        s = np.asarray(self.knot_values, dtype=float)
        if t.size < 2 or t.size != s.size:
            raise ParameterError("need matching knot arrays of length >= 2")
        if t[0] != 0.0 or s[0] != 0.0:
            raise ParameterError("time change must start at S_0 = 0")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(s) < 0):
            raise ParameterError("knots must be increasing in t, nondecreasing in s")


TimeChangeSpec = Union[LinearTimeChange, IntegratedCIR, PiecewiseLinearTimeChange]


class TimeChangePath:
    """Realized continuous increasing path with its generalized inverse.

    The inverse maps u to inf{t : S_t >= u}; at flat segments (a discretization
    artifact) it returns the left endpoint.
    """

    def __init__(self, t_grid: np.ndarray, s_grid: np.ndarray,
                 linear_sigma: Optional[float] = None):
        self.t_grid = t_grid
        self.s_grid = s_grid
        self._sigma = linear_sigma

    @property
    def horizon(self) -> float:
        return float(self.t_grid[-1])

    @property
    def total(self) -> float:
        return float(self.s_grid[-1])

    def value(self, t):
        if self._sigma is not None:
            return self._sigma * np.asarray(t, dtype=float)
        return np.interp(t, self.t_grid, self.s_grid)

    def inverse(self, u):
        if self._sigma is not None:
            return np.asarray(u, dtype=float) / self._sigma
        u = np.asarray(u, dtype=float)
        j = np.searchsorted(self.s_grid, u, side="left")
        j = np.clip(j, 1, self.s_grid.size - 1)
        s0, s1 = self.s_grid[j - 1], self.s_grid[j]
        t0, t1 = self.t_grid[j - 1], self.t_grid[j]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(s1 > s0, (u - s0) / (s1 - s0), 0.0)
        out = t0 + frac * (t1 - t0)
        return np.where(u <= self.s_grid[0], self.t_grid[0], out)


def sample_time_change(spec: TimeChangeSpec, horizon: float, dt: float,
                       rng: Optional[np.random.Generator] = None) -> TimeChangePath:
    """Realize S on [0, horizon]; dt is the grid step for stochastic specs."""
    if horizon <= 0:
        raise ParameterError("horizon must be positive")
    if isinstance(spec, LinearTimeChange):
        grid = np.array([0.0, horizon])
        return TimeChangePath(grid, spec.sigma * grid, linear_sigma=spec.sigma)
    if isinstance(spec, PiecewiseLinearTimeChange):
        t = np.asarray(spec.knot_times, dtype=float)
        s = np.asarray(spec.knot_values, dtype=float)
        if t[-1] < horizon:
            raise ParameterError("knots do not reach the horizon")
        return TimeChangePath(t, s)
    if isinstance(spec, IntegratedCIR):
        if dt <= 0:
            raise ParameterError("dt must be positive")
        if rng is None:
            raise ParameterError("stochastic time change needs an rng")
        n = int(math.ceil(horizon / dt))
        tg = np.linspace(0.0, horizon, n + 1)
        step = tg[1] - tg[0]
        v = np.empty(n + 1)
        v[0] = spec.v0
        z = rng.standard_normal(n)
        for k in range(n):
            vp = max(v[k], 0.0)
            v[k + 1] = v[k] + spec.kappa * (spec.theta - vp) * step \
                + spec.xi * math.sqrt(vp * step) * z[k]
        vp = np.maximum(v, 0.0)
        s = np.concatenate([[0.0], np.cumsum(0.5 * (vp[1:] + vp[:-1]) * step)])
        return TimeChangePath(tg, s)
    raise ParameterError(f"unknown time change spec {type(spec).__name__}")


# ---------------------------------------------------------------------------
# observation series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ObservationSeries:
    """Hitting-time sample path (T_i, Y_{T_i}) of the time-changed process.

    increments holds the rescaled steps eps^-1 (Y_{T_i} - Y_{T_{i-1}}), all
    of magnitude >= 1 by the crossing rule.
    """

    eps: float
    horizon: float
    times: np.ndarray
    values: np.ndarray
    increments: np.ndarray

    def __post_init__(self):
        if self.eps <= 0 or self.horizon <= 0:
            raise ParameterError("eps and horizon must be positive")
        n = len(self.times)
        if len(self.values) != n or len(self.increments) != n:
            raise ParameterError("times, values and increments must align")
        if n == 0:
            return
        prev = np.concatenate([[0.0], self.times[:-1]])
        bad = np.flatnonzero(self.times <= prev)
        if bad.size:
            raise MonotonicityError("times must be strictly increasing",
                                    row=int(bad[0]) + 1)
        bad = np.flatnonzero(np.abs(self.increments) < 1.0 - 1e-9)
        if bad.size:
            raise BarrierViolationError("rescaled increment below barrier",
                                        row=int(bad[0]) + 1)

    def __len__(self) -> int:
        return len(self.times)


def simulate_observations(
    t: LevyTriplet,
    tc: TimeChangeSpec,
    eps: float,
    horizon: float,
    seed: Union[int, tuple],
    replicate: int = 0,
    scheme: Optional[StepScheme] = None,
    tc_dt: float = 1e-3,
    return_path: bool = False,
):
    """Observation series of Y = X o S sampled at barrier crossings.

    Exploits Y = X o S: consecutive exits of X from eps-bands are simulated
    in the X clock (i.i.d. segments by the strong Markov property), their
    cumulative raw times mapped through the inverse time change.  The X and
    S streams are independent children of the seed, honoring the
    independence hypothesis of the central limit theorem.
    """
    if isinstance(seed, tuple):
        rng_x, rng_s = seed
    else:
        rng_x = rngmod.stream(int(seed), rngmod.PURPOSE_PROCESS, replicate)
        rng_s = rngmod.stream(int(seed), rngmod.PURPOSE_TIME_CHANGE, replicate)

    path = sample_time_change(tc, horizon, tc_dt, rng_s)
    budget = path.total
    if budget <= 0.0:
        empty = np.empty(0)
        series = ObservationSeries(eps, horizon, empty, empty.copy(), empty.copy())
        return (series, path) if return_path else series

    raw_chunks, val_chunks = [], []
    consumed = 0.0
    count = 0
    batch = 256
    while consumed < budget:
        rt, rx, _ = exit_batch_raw(t, eps, batch, rng_x, scheme)
        raw_chunks.append(rt)
        val_chunks.append(rx)
        consumed += float(rt.sum())
        count += batch
        mean = consumed / count
        remaining = max(budget - consumed, 0.0) / mean
        batch = int(min(max(64, 1.3 * remaining), 5e5))

    raw = np.concatenate(raw_chunks)
    vals = np.concatenate(val_chunks)
    s = np.cumsum(raw)
    # tolerance absorbs cumsum rounding on boundary crossings at the horizon
    keep = s <= budget * (1.0 + 1e-9)
    s, vals = s[keep], vals[keep]
    times = np.minimum(np.asarray(path.inverse(s), dtype=float), horizon)
    increments = vals / eps
    values = np.cumsum(vals)
    series = ObservationSeries(
        eps=eps, horizon=horizon, times=times, values=values, increments=increments
    )
    return (series, path) if return_path else series
