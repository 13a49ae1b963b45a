"""Integrals and norms on a closed interval.

``integrate`` is an adaptive Simpson rule with Richardson correction.
Panels are refined level by level with vectorised evaluation; accepted
panel contributions are summed in left-to-right order with
:func:`math.fsum`, so the result is identical to a depth-first
recursive implementation regardless of how the work is batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .expr import (
    DifferentiationError,
    ExprTooLargeError,
    Binary,
    Const,
    contains,
    differentiate,
    evaluate_array,
    scalar_function,
)

__all__ = [
    "DEFAULT_TOL",
    "GRID_POINTS",
    "QuadratureError",
    "QuadResult",
    "SupNormResult",
    "integrate",
    "integrate_function",
    "sup_norm",
    "minimum",
    "mean_zero_shift",
    "mean_value",
]

DEFAULT_TOL = 1e-10
MAX_DEPTH = 60
INITIAL_PANELS = 64
MAX_PANELS = 1 << 22
GRID_POINTS = 4097
REFINE_CELLS = 8

_EPS = np.finfo(float).eps


class QuadratureError(ArithmeticError):
    """Integrand not finite, or tolerance not met within the depth cap."""


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions: int

    def summary(self):
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "subdivisions": self.subdivisions,
        }


@dataclass(frozen=True)
class SupNormResult:
    max_value: float
    abs_max: float
    argmax: float
    min_value: float
    argmin: float
    abs_argmax: float


def integrate(f, interval, tol=DEFAULT_TOL, rel_tol=0.0):
    """Integral of the expression ``f`` over ``interval``.

    Parameters
    ----------
    f : Expr
    interval : Interval
    tol : float
        Requested absolute accuracy.
    rel_tol : float, optional
        Relative accuracy; the target becomes ``max(tol, rel_tol * |I|)``
        with ``|I|`` taken from the initial 64-panel estimate.

    Returns
    -------
    QuadResult
        ``error_estimate`` is the sum of the local Richardson estimates
        ``|S2 - S1| / 15`` over accepted panels.
    """
    return integrate_function(lambda xs: evaluate_array(f, xs), interval, tol, rel_tol)


def integrate_function(fn, interval, tol=DEFAULT_TOL, rel_tol=0.0):
    """Adaptive Simpson for a vectorised callable ``fn``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not rel_tol >= 0:
        raise ValueError("rel_tol must be non-negative")
    a, b = interval
    width = b - a

    def sample(xs):
        ys = np.asarray(fn(xs), dtype=float)
        if not np.all(np.isfinite(ys)):
            bad = xs[np.flatnonzero(~np.isfinite(ys))[0]]
            raise QuadratureError(f"non-finite integrand at x={bad!r}")
        return ys

    # panels as arrays of (left, right, f(left), f(mid), f(right), depth)
    edges = np.linspace(a, b, INITIAL_PANELS + 1)
    lo, hi = edges[:-1], edges[1:]
    mid = 0.5 * (lo + hi)
    f_edges = sample(edges)
    f_lo, f_hi = f_edges[:-1], f_edges[1:]
    f_mid = sample(mid)
    coarse = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    if rel_tol > 0:
        tol = max(tol, rel_tol * abs(math.fsum(coarse.tolist())))
    depth = 0

    accepted_left = []
    accepted_value = []
    accepted_error = []
    total_panels = INITIAL_PANELS

    while lo.size:
        if depth >= MAX_DEPTH:
            raise QuadratureError(f"depth cap {MAX_DEPTH} reached without meeting tol={tol!r}")
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        pts = sample(np.concatenate([lm, rm]))
        f_lm, f_rm = pts[: lo.size], pts[lo.size :]
        h = (hi - lo) / 12.0
        left = h * (f_lo + 4.0 * f_lm + f_mid)
        right = h * (f_mid + 4.0 * f_rm + f_hi)
        fine = left + right
        diff = fine - coarse
        local_tol = 15.0 * tol * (hi - lo) / width
        # rounding floor: differences at the level of the panel's own
        # floating-point noise cannot be resolved further
        noise = 64.0 * _EPS * (hi - lo) * (np.abs(f_lo) + np.abs(f_mid) + np.abs(f_hi) + np.abs(f_lm) + np.abs(f_rm))
        ok = np.abs(diff) <= np.maximum(local_tol, noise)
        # a panel that cannot be split further in floating point is accepted
        tiny = (mid <= lo) | (mid >= hi) | (lm <= lo) | (rm >= hi)
        ok |= tiny
        if np.any(ok):
            accepted_left.append(lo[ok])
            accepted_value.append(fine[ok] + diff[ok] / 15.0)
            accepted_error.append(np.abs(diff[ok]) / 15.0)
        keep = ~ok
        if not np.any(keep):
            break
        total_panels += 2 * int(keep.sum())
        if total_panels > MAX_PANELS:
            raise QuadratureError(f"panel budget exhausted before meeting tol={tol!r}")
        lo_k, mid_k, hi_k = lo[keep], mid[keep], hi[keep]
        lo = np.concatenate([lo_k, mid_k])
        hi = np.concatenate([mid_k, hi_k])
        mid = np.concatenate([lm[keep], rm[keep]])
        f_lo = np.concatenate([f_lo[keep], f_mid[keep]])
        f_hi = np.concatenate([f_mid[keep], f_hi[keep]])
        f_mid = np.concatenate([f_lm[keep], f_rm[keep]])
        coarse = np.concatenate([left[keep], right[keep]])
        depth += 1

    lefts = np.concatenate(accepted_left)
    values = np.concatenate(accepted_value)
    errors = np.concatenate(accepted_error)
    order = np.argsort(lefts, kind="stable")
    value = math.fsum(values[order].tolist())
    error = math.fsum(errors[order].tolist())
    return QuadResult(value=value, error_estimate=error, subdivisions=int(lefts.size))


# --------------------------------------------------------------------------
# Extrema
# --------------------------------------------------------------------------


def _derivative_or_none(f):
    if contains(f, "abs"):
        return None
    try:
        return differentiate(f)
    except (DifferentiationError, ExprTooLargeError):
        return None


def _local_max(fs, dfs, lo, hi, best):
    """Refine a maximum of ``fs`` on ``[lo, hi]``; ``best`` is (value, x)."""
    candidates = [best]
    if dfs is not None:
        d_lo, d_hi = dfs(lo), dfs(hi)
        if math.isfinite(d_lo) and math.isfinite(d_hi) and d_lo > 0.0 > d_hi:
            try:
                r = brentq(dfs, lo, hi, xtol=1e-15, rtol=4 * _EPS, maxiter=200)
                candidates.append((fs(r), r))
            except (ValueError, RuntimeError, ArithmeticError):
                pass
    else:
        try:
            res = minimize_scalar(lambda t: -fs(t), bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
            candidates.append((-res.fun, float(res.x)))
        except (ValueError, ArithmeticError):
            pass
    return max(candidates, key=lambda c: (c[0], -c[1]))


def _maximise(f, df, interval, grid):
    """Signed maximum of ``f`` and its location."""
    xs = grid
    ys = evaluate_array(f, xs)
    fs = scalar_function(f)
    dfs = scalar_function(df) if df is not None else None
    n = xs.size
    k = min(REFINE_CELLS, n)
    top = np.argsort(-ys, kind="stable")[:k]
    i0 = int(top[0])
    best = (float(ys[i0]), float(xs[i0]))
    for i in sorted(int(j) for j in top):
        for lo_i, hi_i in ((i - 1, i), (i, i + 1)):
            if lo_i < 0 or hi_i >= n:
                continue
            try:
                best = _local_max(fs, dfs, float(xs[lo_i]), float(xs[hi_i]), best)
            except (ValueError, ArithmeticError):
                continue
    return best


def _grid(interval, points=GRID_POINTS):
    xs = np.linspace(interval.a, interval.b, points)
    xs[0], xs[-1] = interval.a, interval.b
    return xs


def sup_norm(f, interval):
    """Signed maximum, minimum and sup-norm of ``f`` on ``interval``.

    A 4097-point grid is scanned, then the best eight cells for the
    maximum and for the minimum are refined by bracketing roots of
    ``f'`` (or a bounded scalar search when ``f`` contains ``abs``).
    """
    grid = _grid(interval)
    df = _derivative_or_none(f)
    max_value, argmax = _maximise(f, df, interval, grid)
    neg_f = -f
    neg_df = -df if df is not None else None
    neg_min, argmin = _maximise(neg_f, neg_df, interval, grid)
    min_value = -neg_min
    if abs(min_value) > abs(max_value):
        abs_max, abs_argmax = abs(min_value), argmin
    else:
        abs_max, abs_argmax = abs(max_value), argmax
    return SupNormResult(
        max_value=max_value,
        abs_max=abs_max,
        argmax=argmax,
        min_value=min_value,
        argmin=argmin,
        abs_argmax=abs_argmax,
    )


def minimum(f, interval):
    """``(min_value, argmin)`` of ``f`` on ``interval``."""
    grid = _grid(interval)
    df = _derivative_or_none(f)
    value, x = _maximise(-f, -df if df is not None else None, interval, grid)
    return -value, x


def mean_value(f, interval, tol=DEFAULT_TOL):
    res = integrate(f, interval, tol)
    return res.value / interval.width, res


def mean_zero_shift(f, interval, tol=DEFAULT_TOL):
    """Return ``f - mean(f)`` as ``Binary('sub', f, Const(mean))``.

    The original tree is kept intact as the left operand, so the
    derivative of the result is the derivative of ``f``.
    """
    mean, _ = mean_value(f, interval, tol)
    return Binary("sub", f, Const(mean))
