"""Closed-form bounds on the limiting mean value G(w).

Lower bound: max over 0 <= Delta <= w of

    rho(w + Delta) + int_0^Delta rho(t) / (w + Delta - t) dt,

upper bounds: 1 - log w + (log w)^2/2 and the Lambda-form
Lambda(w) log(1 + e^gamma/(w Lambda(w))) with
Lambda(w) = (w + 1/w)/2 + (log w / 2)(w - 1/w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dickman import (DickmanTable, EXP_GAMMA, ParameterError, RangeError,
                      rho)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BoundsRow:
    w: float
    lower_eq13: float
    upper_quadratic: float
    upper_lambda: float
    best_upper: float
    argmax_delta: float


def _integral_piecewise(table: DickmanTable, w_plus_delta: float,
                        delta: float, panels_per_unit: int = 256) -> float:
    """int_0^Delta rho(t)/(w+Delta-t) dt, Simpson split at the integer
    kinks of rho; denominator >= w > 0 keeps the integrand smooth."""
    if delta <= 0.0:
        return 0.0
    total = 0.0
    cuts = [0.0] + [float(m) for m in range(1, math.ceil(delta))] + [delta]
    for a, b in zip(cuts, cuts[1:]):
        n = panels_per_unit
        t = np.linspace(a, b, 2 * n + 1)
        f = rho(table, t) / (w_plus_delta - t)
        hh = (b - a) / (2 * n)
        total += (hh / 3.0) * (f[0] + f[-1] + 4.0 * f[1::2].sum()
                               + 2.0 * f[2:-1:2].sum())
    return total


def lower_objective(table: DickmanTable, w: float, delta: float) -> float:
    """The Delta-objective whose maximum is the explicit lower bound."""
    return rho(table, w + delta) + _integral_piecewise(table, w + delta, delta)


def theorem1_lower(w: float, dickman: DickmanTable, delta_grid: float | None = None):
    """Maximize the lower-bound objective over Delta in [0, w].

    By default: coarse 200-point scan (the objective is not proven
    unimodal, so every bracketed local maximum is refined) followed by
    golden-section to |Delta - argmax| <= 1e-6.

    With delta_grid set, the maximum is instead taken over multiples of
    delta_grid in [0, w] plus the endpoint w.  The published reference
    table was evaluated on a 0.1 grid, so table reproduction uses
    delta_grid=0.1; any Delta yields a valid lower bound.

    Returns (value, argmax_delta)."""
    if w < 1:
        raise ParameterError(f"w must be >= 1, got {w}")
    if dickman.w_max + 1e-9 < 2 * w:
        raise RangeError(f"dickman table w_max={dickman.w_max} < 2w={2 * w}")

    if delta_grid is not None:
        cand = list(np.arange(0.0, w + 1e-12, delta_grid))
        if w - cand[-1] > 1e-12:
            cand.append(w)
        vals = [lower_objective(dickman, w, d) for d in cand]
        i = int(np.argmax(vals))
        return vals[i], cand[i]

    n_scan = 200
    deltas = np.linspace(0.0, w, n_scan + 1)
    vals = np.array([lower_objective(dickman, w, d) for d in deltas])

    best_val = -math.inf
    best_delta = 0.0
    i_best = int(np.argmax(vals))
    brackets = set()
    for i in range(1, n_scan):
        if vals[i] >= vals[i - 1] and vals[i] >= vals[i + 1]:
            brackets.add(i)
    brackets.add(i_best)
    for i in brackets:
        lo = deltas[max(i - 1, 0)]
        hi = deltas[min(i + 1, n_scan)]
        d, v = _golden_max(lambda x: lower_objective(dickman, w, x), lo, hi)
        if v > best_val:
            best_val, best_delta = v, d
    # scan endpoints are valid candidates too
    for i in (0, n_scan):
        if vals[i] > best_val:
            best_val, best_delta = vals[i], deltas[i]
    return best_val, best_delta


def _golden_max(f, lo: float, hi: float, tol: float = 1e-6):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def theorem3_upper_quadratic(w: float) -> float:
    """1 - log w + (log w)^2 / 2, exact."""
    if w < 1:
        raise ParameterError(f"w must be >= 1, got {w}")
    lw = math.log(w)
    return 1.0 - lw + lw * lw / 2.0


def theorem3_upper_lambda(w: float) -> float:
    """Lambda(w) log(1 + e^gamma / (w Lambda(w))), exact."""
    if w < 1:
        raise ParameterError(f"w must be >= 1, got {w}")
    lam = 0.5 * (w + 1.0 / w) + 0.5 * math.log(w) * (w - 1.0 / w)
    return lam * math.log1p(EXP_GAMMA / (w * lam))


def bounds_table(w_list, dickman: DickmanTable,
                 delta_grid: float | None = 0.1):
    """One BoundsRow per w, combining the lower bound and both uppers.

    delta_grid defaults to the reference table's 0.1 Delta resolution;
    pass None for the fully refined maximization."""
    rows = []
    for w in w_list:
        lower, argmax = theorem1_lower(w, dickman, delta_grid=delta_grid)
        uq = theorem3_upper_quadratic(w)
        ul = theorem3_upper_lambda(w)
        rows.append(BoundsRow(
            w=float(w),
            lower_eq13=lower,
            upper_quadratic=uq,
            upper_lambda=ul,
            best_upper=min(uq, ul),
            argmax_delta=argmax,
        ))
    return rows


CSV_HEADER = "w,lower,upper_quadratic,upper_lambda,best_upper,argmax_delta"


def rows_to_csv(rows, digits: int = 6) -> str:
    """Byte-stable CSV rendering; half-to-even rounding via format()."""
    out = [CSV_HEADER]
    for r in rows:
        out.append(",".join(format(x, f".{digits}f") for x in (
            r.w, r.lower_eq13, r.upper_quadratic, r.upper_lambda,
            r.best_upper, r.argmax_delta)))
    return "\n".join(out) + "\n"


def rows_to_records(rows):
    return [dict(w=r.w, lower=r.lower_eq13, upper_quadratic=r.upper_quadratic,
                 upper_lambda=r.upper_lambda, best_upper=r.best_upper,
                 argmax_delta=r.argmax_delta) for r in rows]


def asymptotic_lower_report(w: float, dickman: DickmanTable) -> dict:
    """Qualitative report on the large-w behaviour of the lower bound;
    nothing is asserted here because the o(1) terms are unquantified."""
    if w < 10:
        raise ParameterError(f"w must be >= 10 for the report, got {w}")
    value, argmax = theorem1_lower(w, dickman)
    predicted_delta = math.log(w) / math.log(math.log(w))
    return dict(
        w=w,
        value=value,
        argmax_delta=argmax,
        predicted_delta=predicted_delta,
        delta_ratio=argmax / predicted_delta,
        hall_limit=EXP_GAMMA / w,
    )
