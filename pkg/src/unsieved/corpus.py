"""Seeded random-kernel corpus and the invariant suite run over it.

Each kernel is checked against every inequality the solver must satisfy:
the Hall bound, the Dickman lower bound, the alternating-series sandwich,
the two-sided Lipschitz estimates, the mass-function inequalities, the
Laplace-transform identity, and the smoothed upper bound.  The Lipschitz
ratio of the Hoelder-type modulus is monitored but never asserted, since
its implied constant is not pinned down.
"""

from __future__ import annotations

import math

import numpy as np

from .dickman import DickmanTable, EXP_GAMMA, build_dickman, rho
from .kernel import (ChiKernel, compute_B, compute_E, laplace_identity_rhs,
                     laplace_sigma, sandwich_bounds, sandwich_tolerance,
                     solve_sigma)

CORPUS_U_MAX = 8.0
CORPUS_STEP = 2.0**-9
HALL_TOL = 1e-6
THEOREM5_TOL = 1e-6
LAPLACE_TOL = 1e-6
SMOOTHED_TOL = 1e-4
LIPSCHITZ_TOL_FACTOR = 10.0   # times step^2
MASS_TOL = 1e-9               # pure float slack on exact closed forms
LAPLACE_S = (0.5, 1.0, 2.0)
LIPSCHITZ_DELTAS = (0.01, 0.1, 0.5, 1.0)
SANDWICH_ORDERS = (0, 2, 4)


def random_kernel(rng: np.random.Generator) -> ChiKernel:
    """One random piecewise-constant kernel: 1-8 interior breakpoints
    drawn uniformly from (1, 10], plateau values uniform on [0, 1]."""
    n_breaks = int(rng.integers(1, 9))
    extra = np.sort(rng.uniform(1.0, 10.0, size=n_breaks - 1))
    breakpoints = (1.0,) + tuple(float(b) for b in extra)
    values = tuple(float(v) for v in rng.uniform(0.0, 1.0, size=n_breaks))
    return ChiKernel(breakpoints=breakpoints, plateau_values=values)


def random_corpus(seed: int, count: int = 100) -> list[ChiKernel]:
    rng = np.random.default_rng(seed)
    return [random_kernel(rng) for _ in range(count)]


def _check_hall(sol) -> float:
    """Worst margin of sigma(u) - e^gamma/E(u) over the grid (<= 0 good)."""
    grid = sol.grid
    mask = grid > 0
    return float(np.max(sol.sigma_values[mask]
                        - EXP_GAMMA / sol.E_values[mask]))


def _check_theorem5(sol, dickman: DickmanTable) -> float:
    """Worst margin of rho(E(u)) - sigma(u) over the grid (<= 0 good)."""
    r = rho(dickman, np.minimum(sol.E_values, dickman.w_max))
    return float(np.max(r - sol.sigma_values))


def _check_sandwich(kernel: ChiKernel, sol, u: float) -> dict:
    """Partial sums of the alternating series must bracket sigma(u)."""
    out = {}
    sig = float(sol.sigma(u))
    for n in SANDWICH_ORDERS:
        lo, hi = sandwich_bounds(kernel, u, n, CORPUS_STEP)
        tol = sandwich_tolerance(kernel, u, n, CORPUS_STEP)
        out[f"n{n}"] = {
            "lower_margin": sig - (lo - tol),   # >= 0 good
            "upper_margin": (hi + tol) - sig,   # >= 0 good
        }
    return out


def _check_lipschitz(sol, u: float) -> dict:
    """Two-sided modulus-of-continuity bounds at u(1+delta) vs u."""
    tol = LIPSCHITZ_TOL_FACTOR * CORPUS_STEP**2
    e = float(sol.E(u))
    le = math.log(e)
    out = {}
    for delta in LIPSCHITZ_DELTAS:
        diff = float(sol.sigma(u * (1.0 + delta)) - sol.sigma(u))
        ld = math.log1p(delta)
        upper = ld * ((e - 1.0 / e) / 2.0 + le * (e + 1.0 / e) / 2.0)
        lower = -ld * ((e + 1.0 / e) / 2.0 + le * (e - 1.0 / e) / 2.0)
        out[f"delta{delta:g}"] = {
            "upper_margin": (upper + tol) - diff,   # >= 0 good
            "lower_margin": diff - (lower - tol),   # >= 0 good
        }
    return out


def _check_mass_function(kernel: ChiKernel, rng: np.random.Generator,
                         n_pairs: int = 20) -> float:
    """Exact two-sided bounds tying B(y)-B(t) to E(y)/E(t); returns the
    worst violation margin over random 0 <= t <= y (<= 0 good)."""
    worst = -math.inf
    for _ in range(n_pairs):
        y = float(rng.uniform(0.0, CORPUS_U_MAX))
        t = float(rng.uniform(0.0, y))
        ey, et = compute_E(kernel, y), compute_E(kernel, t)
        db = compute_B(kernel, y) - compute_B(kernel, t)
        lower = y * et / ey - t
        upper = y - t * ey / et
        worst = max(worst, lower - db, db - upper)
    return worst


def _check_laplace(kernel: ChiKernel) -> dict:
    """Transform of sigma vs its closed-form expression at several s."""
    u_need = -math.log(1e-10) / min(LAPLACE_S)
    n_units = math.ceil(u_need) + 1
    long_sol = solve_sigma(kernel, u_max=float(n_units), step=2.0**-8)
    out = {}
    for s in LAPLACE_S:
        lhs = laplace_sigma(long_sol, s)
        rhs = laplace_identity_rhs(kernel, s)
        out[f"s{s:g}"] = abs(lhs - rhs)
    return out


def _check_smoothed_upper(kernel: ChiKernel, sol, u: float) -> float:
    """sigma(u) <= e^gamma/E(u) - (1/u) int_u^inf sigma_hat, where
    sigma_hat solves the kernel truncated to zero beyond u.  Returns the
    violation margin (<= 0 good)."""
    trunc = ChiKernel(
        breakpoints=tuple(b for b in kernel.breakpoints if b < u) + (u,),
        plateau_values=tuple(v for b, v in zip(kernel.breakpoints,
                                               kernel.plateau_values)
                             if b < u) + (0.0,),
    )
    # sigma_hat decays like rho(E(u) t / u); rho drops below 1e-8 near 12
    step = 2.0**-7
    e_u = float(sol.E(u))
    u_top = float(math.ceil(12.0 * u / e_u) + 2)
    hat = solve_sigma(trunc, u_max=u_top, step=step)
    while hat.sigma_values[-1] > 1e-8 and u_top < 150.0:
        u_top += 8.0
        hat = solve_sigma(trunc, u_max=u_top, step=step)
    grid = hat.grid
    tail = float(np.trapezoid(hat.sigma_values[grid >= u - 1e-12],
                              grid[grid >= u - 1e-12]))
    lhs = float(sol.sigma(u))
    rhs = EXP_GAMMA / float(sol.E(u)) - tail / u
    return lhs - rhs


def _lipschitz_ratio(sol, rng: np.random.Generator,
                     n_pairs: int = 20) -> float:
    """Max observed |sigma(u)-sigma(v)| over the Hoelder-type modulus
    ((u-v)/u)^(1-1/pi) (1 + log(u/(u-v))); reported, never asserted."""
    worst = 0.0
    expo = 1.0 - 1.0 / math.pi
    for _ in range(n_pairs):
        u = float(rng.uniform(1.0, CORPUS_U_MAX))
        v = float(rng.uniform(1.0, u))
        if u - v < 1e-9:
            continue
        modulus = ((u - v) / u) ** expo * (1.0 + math.log(u / (u - v)))
        worst = max(worst, abs(float(sol.sigma(u) - sol.sigma(v))) / modulus)
    return worst


def check_kernel(kernel: ChiKernel, dickman: DickmanTable,
                 rng: np.random.Generator) -> dict:
    """All property checks for one kernel; margins with sign convention
    'violation > 0' live under the "violations" computation below."""
    sol = solve_sigma(kernel, u_max=CORPUS_U_MAX, step=CORPUS_STEP)
    u_mid = CORPUS_U_MAX / 2.0

    report = {
        "kernel": kernel.serialize(),
        "hall_margin": _check_hall(sol) - HALL_TOL,
        "theorem5_margin": _check_theorem5(sol, dickman) - THEOREM5_TOL,
        "sandwich": _check_sandwich(kernel, sol, u=3.0),
        "lipschitz": _check_lipschitz(sol, u=u_mid),
        "mass_margin": _check_mass_function(kernel, rng) - MASS_TOL,
        "laplace": _check_laplace(kernel),
        "smoothed_margin_u4": _check_smoothed_upper(kernel, sol, 4.0)
        - SMOOTHED_TOL,
        "smoothed_margin_u8": _check_smoothed_upper(kernel, sol,
                                                    CORPUS_U_MAX)
        - SMOOTHED_TOL,
        "lipschitz_ratio_monitor": _lipschitz_ratio(sol, rng),
    }
    report["violations"] = _collect_violations(report)
    return report


def _collect_violations(report: dict) -> list[str]:
    v = []
    for key in ("hall_margin", "theorem5_margin", "mass_margin",
                "smoothed_margin_u4", "smoothed_margin_u8"):
        if report[key] > 0.0:
            v.append(key)
    for n, d in report["sandwich"].items():
        for side, margin in d.items():
            if margin < 0.0:
                v.append(f"sandwich.{n}.{side}")
    for dl, d in report["lipschitz"].items():
        for side, margin in d.items():
            if margin < 0.0:
                v.append(f"lipschitz.{dl}.{side}")
    for s, err in report["laplace"].items():
        if err > LAPLACE_TOL:
            v.append(f"laplace.{s}")
    return v


def run_property_suite(seed: int = 42, count: int = 100,
                       dickman: DickmanTable | None = None) -> dict:
    """Run the full invariant suite over the seeded corpus.

    Returns a JSON-serializable summary; summary["n_violations"] == 0
    means every asserted inequality held for every kernel.
    """
    if dickman is None:
        dickman = build_dickman(CORPUS_U_MAX + 1.0, 2.0**-10)
    rng = np.random.default_rng(seed)
    kernels = [random_kernel(rng) for _ in range(count)]

    per_kernel = []
    violations = []
    monitor = []
    for i, kern in enumerate(kernels):
        rep = check_kernel(kern, dickman, rng)
        per_kernel.append(rep)
        monitor.append(rep["lipschitz_ratio_monitor"])
        for name in rep["violations"]:
            violations.append({"kernel_index": i, "check": name})

    def worst(key):
        return max(rep[key] for rep in per_kernel) if per_kernel else None

    summary = {
        "seed": seed,
        "count": count,
        "u_max": CORPUS_U_MAX,
        "step": CORPUS_STEP,
        "n_violations": len(violations),
        "violations": violations,
        "worst_hall_margin": worst("hall_margin"),
        "worst_theorem5_margin": worst("theorem5_margin"),
        "worst_mass_margin": worst("mass_margin"),
        "worst_smoothed_margin": (max(worst("smoothed_margin_u4"),
                                      worst("smoothed_margin_u8"))
                                  if per_kernel else None),
        "worst_laplace_error": (max(max(rep["laplace"].values())
                                    for rep in per_kernel)
                                if per_kernel else None),
        "max_lipschitz_ratio": max(monitor) if monitor else None,
        "kernels": per_kernel,
    }
    if count == 0:
        summary["warning"] = "empty corpus: vacuous pass"
    return summary
