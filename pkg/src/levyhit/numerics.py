"""Quadrature and extrapolation helpers for Levy-measure integrals.

All measure integrals in the package run through :func:`quad_checked` so
convergence failures surface as QuadratureError instead of silent garbage.
Integrals against a Levy density with a singularity at the origin are split
per half-line; finiteness of diverging-candidate integrals is decided with
the dyadic-shell heuristic of :func:`dyadic_shell_sum`.
"""

import math

import numpy as np
from scipy import integrate

from .errors import QuadratureError

# Declared absolute tolerance for finiteness/zero decisions near the origin.
ABS_TOL = 1e-10
# Partial sums beyond this are treated as numerically divergent.
DIVERGENCE_BOUND = 1e8


def quad_checked(fn, a, b, tol: float = 1e-10, limit: int = 200) -> float:
    """scipy.integrate.quad with failure promoted to QuadratureError."""
    with np.errstate(all="ignore"):
        out = integrate.quad(fn, a, b, epsabs=tol, epsrel=1e-10, limit=limit,
                             full_output=True)
    val, err = out[0], out[1]
    if len(out) > 3:  # message present -> warning raised by QUADPACK
        # Round-off warnings on nearly-zero integrals are benign; anything
        # else with a large error estimate is a real failure.
        if not (abs(err) <= max(tol, 1e-8 * abs(val)) or abs(val) < tol):
            raise QuadratureError(
                f"integral over ({a}, {b}) did not converge: value={val}, err={err}: {out[3]}"
            )
    if not math.isfinite(val):
        raise QuadratureError(f"integral over ({a}, {b}) is not finite")
    return val


def halfline_quad(fn, a: float, tol: float = 1e-10) -> float:
    """Integral of fn over (a, inf), a >= 0, splitting at 1 for stability."""
    if a < 1.0:
        return quad_checked(fn, a, 1.0, tol) + quad_checked(fn, 1.0, np.inf, tol)
    return quad_checked(fn, a, np.inf, tol)


def dyadic_shell_sum(shell_fn, k_max: int = 50, tail_window: int = 8):
    """Decide finiteness of sum_k shell_fn(k) over dyadic shells (2^-k-1, 2^-k].

    shell_fn(k) must return the (nonnegative) integral over shell k.  Returns
    (finite, total) where total includes a geometric tail estimate when the
    trailing shells decay.  The decision is the documented heuristic: trailing
    shells with ratio >= 1 - 1e-3, or partial sums beyond DIVERGENCE_BOUND,
    count as divergent.
    """
    shells = []
    total = 0.0
    for k in range(k_max + 1):
        s = shell_fn(k)
        shells.append(s)
        total += s
        if total > DIVERGENCE_BOUND:
            return False, math.inf
    tail = [s for s in shells[-tail_window:] if s > 0]
    if len(tail) < 2:
        return True, total  # shells vanished: measure is inactive near 0
    ratios = [tail[i + 1] / tail[i] for i in range(len(tail) - 1)]
    rho = float(np.exp(np.mean(np.log(ratios))))
    if rho >= 1.0 - 1e-3:
        return False, math.inf
    # geometric tail bound from the last shell
    total += tail[-1] * rho / (1.0 - rho)
    return True, total


def aitken_limit(seq) -> tuple[float, float]:
    """Aitken delta-squared limit of a (nearly) geometric sequence.

    Returns (limit, error_estimate).  Exact for a_k = c + b*r^k, which covers
    Holder-regular densities g(x) = c + b|x|^theta sampled on geometric grids.
    """
    a = np.asarray(seq, dtype=float)
    if a.size == 0:
        raise ValueError("empty sequence")
    if a.size < 3:
        return float(a[-1]), float("inf") if a.size == 1 else abs(a[-1] - a[-2])
    best = float(a[-1])
    err = abs(a[-1] - a[-2])
    # run Aitken on the trailing triples; keep the last numerically-stable one
    for i in range(a.size - 3, -1, -1):
        d1 = a[i + 1] - a[i]
        d2 = a[i + 2] - a[i + 1]
        den = d2 - d1
        if den == 0.0 or abs(den) < 1e-3 * (abs(d1) + abs(d2)):
            continue
        cand = a[i + 2] - d2 * d2 / den
        return float(cand), abs(cand - best)
    return best, err


def geometric_grid(k_min: int = 10, k_max: int = 40) -> np.ndarray:
    """The dyadic approach grid x = 2^-k, k = k_min..k_max (decreasing x)."""
    return 2.0 ** (-np.arange(k_min, k_max + 1, dtype=float))
