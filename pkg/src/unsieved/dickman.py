"""Dickman-de Bruijn function rho(w) on a fixed grid.

rho(w) = 1 for 0 <= w <= 1 and w rho'(w) = -rho(w-1) for w >= 1.  The
table is built by marching the integrated form

    rho(w) = rho(n) - int_n^w rho(t-1)/t dt        (n <= w <= n+1)

unit interval by unit interval with a cumulative Simpson rule.  The
delayed argument t-1 always lands on grid nodes because the step is
required to divide 1 exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Euler-Mascheroni constant gamma = 0.57721566490153286061...;
# e^gamma to 20 significant digits.
EULER_GAMMA = 0.57721566490153286061
EXP_GAMMA = 1.7810724179901979852


class ParameterError(ValueError):
    """Invalid precision or shape parameter."""


class RangeError(ValueError):
    """Argument outside the tabulated range."""


@dataclass(frozen=True)
class DickmanTable:
    """Immutable grid of rho values on [0, w_max]; safe for shared reads."""

    w_max: float
    step: float
    values: np.ndarray          # rho at nodes k*step, k = 0 .. n_nodes-1
    cumulative: np.ndarray      # int_0^{k*step} rho(t) dt at the same nodes

    @property
    def n_per_unit(self) -> int:
        return round(1.0 / self.step)

    def rho(self, w):
        return rho(self, w)

    def rho_integral(self, a: float, b: float) -> float:
        return rho_integral(self, a, b)


def _cumulative_panels(g: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral of grid samples g, O(h^4), anchored at g[0].

    Even nodes use composite Simpson; odd nodes add a closed 3-point rule
    over the last cell.  Valid only when g is smooth across the whole
    sample window, so callers must split at kinks.
    """
    n = len(g) - 1
    out = np.empty(n + 1)
    out[0] = 0.0
    if n >= 2:
        pair = (h / 3.0) * (g[0:-2:2] + 4.0 * g[1:-1:2] + g[2::2])
        out[2::2] = np.cumsum(pair)
    if n >= 1:
        if n == 1:
            out[1] = (h / 2.0) * (g[0] + g[1])
            return out
        # forward 3-point rule for the very first cell
        out[1] = (h / 12.0) * (5.0 * g[0] + 8.0 * g[1] - g[2])
        # backward 3-point rule on the last cell for odd m >= 3
        m = np.arange(3, n + 1, 2)
        out[m] = out[m - 1] + (h / 12.0) * (5.0 * g[m] + 8.0 * g[m - 1] - g[m - 2])
    return out


def build_dickman(w_max: float, step: float) -> DickmanTable:
    """Tabulate rho on [0, w_max] at the given grid spacing.

    step must divide 1 exactly and be at most 1/64; w_max >= 2.
    """
    if w_max < 2:
        raise ParameterError(f"w_max must be >= 2, got {w_max}")
    if not (0 < step <= 1.0 / 64.0):
        raise ParameterError(f"step must be in (0, 1/64], got {step}")
    n = round(1.0 / step)
    if abs(n * step - 1.0) > 1e-12:
        raise ParameterError(f"step must divide 1 exactly, got {step}")

    n_nodes = math.floor(w_max / step + 1e-9) + 1
    last = n_nodes - 1
    t = np.arange(n_nodes) * step
    rho_vals = np.empty(n_nodes)
    rho_vals[: min(n + 1, n_nodes)] = 1.0

    # march unit by unit; integrand g(t) = rho(t-1)/t is smooth inside
    # each unit panel and known before any node of the panel is needed
    start = n
    while start < last:
        stop = min(start + n, last)
        g = rho_vals[start - n : stop - n + 1] / t[start : stop + 1]
        rho_vals[start : stop + 1] = rho_vals[start] - _cumulative_panels(g, step)
        start = stop
    np.clip(rho_vals, 0.0, 1.0, out=rho_vals)

    # cumulative integral of rho itself, anchored per unit (kinks sit at
    # the integer nodes)
    cum = np.empty(n_nodes)
    cum[0] = 0.0
    start = 0
    while start < last:
        stop = min(start + n, last)
        seg = _cumulative_panels(rho_vals[start : stop + 1], step)
        cum[start : stop + 1] = cum[start] + seg
        start = stop

    return DickmanTable(w_max=last * step, step=step, values=rho_vals,
                        cumulative=cum)


def _interp_cubic(table_values: np.ndarray, step: float, w, n_per_unit: int):
    """4-point Lagrange interpolation with the stencil kept inside one
    unit interval so it never straddles a derivative kink of rho."""
    w = np.asarray(w, dtype=float)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)
    x = w / step
    n_nodes = len(table_values)
    idx = np.floor(x).astype(np.int64)
    idx = np.clip(idx, 0, n_nodes - 2)

    # stencil [i0, i0+3] confined to the unit panel containing w
    unit_lo = (idx // n_per_unit) * n_per_unit
    unit_hi = np.minimum(unit_lo + n_per_unit, n_nodes - 1)
    i0 = np.clip(idx - 1, unit_lo, np.maximum(unit_hi - 3, unit_lo))

    s = x - i0
    f0 = table_values[i0]
    f1 = table_values[np.minimum(i0 + 1, n_nodes - 1)]
    f2 = table_values[np.minimum(i0 + 2, n_nodes - 1)]
    f3 = table_values[np.minimum(i0 + 3, n_nodes - 1)]
    out = (
        -f0 * (s - 1) * (s - 2) * (s - 3) / 6.0
        + f1 * s * (s - 2) * (s - 3) / 2.0
        - f2 * s * (s - 1) * (s - 3) / 2.0
        + f3 * s * (s - 1) * (s - 2) / 6.0
    )
    return out[0] if scalar else out


def rho(table: DickmanTable, w):
    """Interpolated rho(w); exact 1 for w <= 1.  Accepts scalars or arrays."""
    w_arr = np.atleast_1d(np.asarray(w, dtype=float))
    if np.any(w_arr < 0) or np.any(w_arr > table.w_max + 1e-12):
        raise RangeError(f"w outside [0, {table.w_max}]")
    out = _interp_cubic(table.values, table.step, w_arr, table.n_per_unit)
    out = np.clip(out, 0.0, 1.0)
    out[w_arr <= 1.0] = 1.0
    if np.ndim(w) == 0:
        return float(out[0])
    return out


def rho_integral(table: DickmanTable, a: float, b: float) -> float:
    """int_a^b rho(t) dt.  b may be math.inf: the integral is then taken
    to w_max, the dropped tail being below 2*rho(w_max) (rho decays
    super-exponentially, rho(w+1) <= rho(w)/(w+1))."""
    if a < 0:
        raise RangeError(f"a must be >= 0, got {a}")
    if b < a:
        raise ParameterError(f"need a <= b, got a={a}, b={b}")
    if math.isinf(b):
        b = table.w_max
    elif b > table.w_max + 1e-12:
        raise RangeError(f"b exceeds w_max={table.w_max}")
    ca = _interp_cubic(table.cumulative, table.step, min(a, table.w_max),
                       table.n_per_unit)
    cb = _interp_cubic(table.cumulative, table.step, min(b, table.w_max),
                       table.n_per_unit)
    return float(cb - ca)


def rho_tail_bound(table: DickmanTable) -> float:
    """Bound on int_{w_max}^infty rho, reported alongside improper integrals."""
    return 2.0 * float(table.values[-1])
