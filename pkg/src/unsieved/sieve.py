"""Integer-side oracle: exact mean values of multiplicative functions.

Everything here works with actual integers n <= x: smooth-number counts,
mean values (1/x) sum_{n<=x} f(n) for completely multiplicative f with
values in [0,1], the Euler product Theta(f,x), and the prime-weighted
kernel chi_f(t) that links the discrete mean value to the continuous
solution sigma(u).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dickman import DickmanTable, ParameterError, RangeError, build_dickman
from .kernel import ChiKernel, SigmaSolution, solve_sigma

X_CAP_DEFAULT = 10**8
_SEGMENT_THRESHOLD = 10**7
_SEGMENT_SIZE = 1 << 22


class ResourceError(RuntimeError):
    """Requested computation exceeds the configured memory/size cap."""


def _primes_upto(n: int) -> np.ndarray:
    """Primes <= n by a straightforward Eratosthenes sieve."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


@dataclass(frozen=True)
class MultiplicativeSpec:
    """Finite description of a completely multiplicative f: primes -> [0,1].

    Three forms are supported:
      * kind="smooth": f is the indicator of y-smooth numbers
        (f(p)=1 for p <= y, 0 otherwise);
      * kind="theorem1": f(p)=0 for p in [y, y^w], 1 otherwise;
      * kind="table": explicit (p_lo, p_hi, value) rows, first match wins,
        unlisted primes get f(p)=1.

    Text format (one spec per file):
        smooth 1000
        theorem1 100 1.5
        table
        10 100 0.5
        100 1000 0.0
    """

    kind: str
    y: float = 0.0
    w: float = 0.0
    rows: tuple[tuple[float, float, float], ...] = field(default=())

    def __post_init__(self):
        if self.kind not in ("smooth", "theorem1", "table"):
            raise ParameterError(f"unknown spec kind {self.kind!r}")
        if self.kind in ("smooth", "theorem1") and self.y < 2:
            raise ParameterError(f"y must be >= 2, got {self.y}")
        if self.kind == "theorem1" and self.w < 1:
            raise ParameterError(f"w must be >= 1, got {self.w}")
        for lo, hi, v in self.rows:
            if not (0.0 <= v <= 1.0):
                raise ParameterError(f"table value {v} outside [0, 1]")
            if lo > hi:
                raise ParameterError(f"empty prime interval [{lo}, {hi}]")

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        """f(p) for each prime in the given array."""
        p = np.asarray(primes, dtype=float)
        if self.kind == "smooth":
            return (p <= self.y).astype(float)
        if self.kind == "theorem1":
            return 1.0 - ((p >= self.y) & (p <= self.y**self.w)).astype(float)
        out = np.ones_like(p)
        assigned = np.zeros_like(p, dtype=bool)
        for lo, hi, v in self.rows:
            hit = (p >= lo) & (p <= hi) & ~assigned
            out[hit] = v
            assigned |= hit
        return out

    def serialize(self) -> str:
        if self.kind == "smooth":
            return f"smooth {self.y:g}\n"
        if self.kind == "theorem1":
            return f"theorem1 {self.y:g} {self.w:g}\n"
        lines = ["table"]
        lines += [f"{lo:g} {hi:g} {v!r}" for lo, hi, v in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "MultiplicativeSpec":
        lines = [ln.strip() for ln in text.splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ParameterError("empty multiplicative spec")
        head = lines[0].split()
        try:
            if head[0] == "smooth" and len(head) == 2:
                return cls(kind="smooth", y=float(head[1]))
            if head[0] == "theorem1" and len(head) == 3:
                return cls(kind="theorem1", y=float(head[1]), w=float(head[2]))
            if head[0] == "table" and len(head) == 1:
                rows = []
                for ln in lines[1:]:
                    lo, hi, v = ln.split()
                    rows.append((float(lo), float(hi), float(v)))
                return cls(kind="table", rows=tuple(rows))
        except (ValueError, IndexError) as exc:
            raise ParameterError(f"malformed spec line: {exc}") from exc
        raise ParameterError(f"unrecognized spec header {lines[0]!r}")


@dataclass(frozen=True)
class SieveResult:
    """Exact summary of one sieve run at a given cutoff x."""

    x: int
    mean: float            # (1/x) sum_{n<=x} f(n)
    theta: float           # Euler product over primes <= x
    count_weighted: float  # sum_{n<=x} f(n)


def _check_cap(x: int, x_cap: int) -> None:
    if not (2 <= x <= x_cap):
        raise ResourceError(f"x={x} outside supported range [2, {x_cap}]")


def mean_value(spec: MultiplicativeSpec, x: int,
               x_cap: int = X_CAP_DEFAULT) -> SieveResult:
    """Exact (1/x) sum_{n<=x} f(n) plus the Euler product Theta(f,x).

    The value array starts at all ones and each prime power p^k <= x
    contributes one factor f(p) to its multiples, so n accumulates
    f(p)^{v_p(n)} over its factorization.
    """
    _check_cap(x, x_cap)
    primes = _primes_upto(x)
    fp = spec.prime_values(primes)

    val = np.ones(x + 1)
    val[0] = 0.0
    for p, v in zip(primes, fp):
        if v == 1.0:
            continue
        if v == 0.0:
            val[p::p] = 0.0
            continue
        pk = p
        while pk <= x:
            val[pk::pk] *= v
            pk *= p
    count = float(val.sum())

    # log Theta = sum_p log(1 - 1/p) - log(1 - f(p)/p), exact for
    # completely multiplicative f with 0 <= f <= 1
    pf = primes.astype(np.longdouble)
    log_theta = np.sum(np.log1p(-1.0 / pf) - np.log1p(-fp / pf),
                       dtype=np.longdouble)
    return SieveResult(x=x, mean=count / x, theta=float(np.exp(log_theta)),
                       count_weighted=count)


def psi_smooth(x: int, y: int, x_cap: int = X_CAP_DEFAULT) -> int:
    """Exact count of y-smooth integers n <= x (all prime factors <= y)."""
    _check_cap(x, x_cap)
    if y < 2:
        raise ParameterError(f"y must be >= 2, got {y}")
    if y >= x:
        return x
    if x <= _SEGMENT_THRESHOLD:
        smooth = np.ones(x + 1, dtype=bool)
        smooth[0] = False
        for p in _primes_upto(x):
            if p > y:
                smooth[p::p] = False
        return int(smooth.sum())
    return _psi_smooth_segmented(x, y)


def _psi_smooth_segmented(x: int, y: int) -> int:
    """Block sieve: divide every n in a block by its prime factors <= y
    and count blocks entries reduced all the way to 1."""
    small = _primes_upto(y)
    total = 0
    lo = 1
    while lo <= x:
        hi = min(lo + _SEGMENT_SIZE, x + 1)
        res = np.arange(lo, hi, dtype=np.int64)
        for p in small:
            pk = int(p)
            while pk < hi:
                s = (-lo) % pk
                res[s::pk] //= p
                pk *= p
        total += int((res == 1).sum())
        lo = hi
    return total


def _smooth_indicator(x: int, y: float) -> np.ndarray:
    """Boolean array of length x+1 marking y-smooth n (index 0 excluded)."""
    smooth = np.ones(x + 1, dtype=bool)
    smooth[0] = False
    for p in _primes_upto(x):
        if p > y:
            smooth[p::p] = False
    return smooth


def chi_from_f(spec: MultiplicativeSpec, y: float, u_max: float, step: float,
               x_cap: int = X_CAP_DEFAULT) -> ChiKernel:
    """Piecewise-constant kernel through samples of
    chi_f(t) = (sum_{p <= y^t} f(p) log p) / theta(y^t), t = 1..u_max.

    theta here is the Chebyshev sum of log p.  The value on each grid
    cell [t, t+step) is the sample at the right node t+step; chi(t)=1
    holds on [0,1) by the kernel type itself.
    """
    if y < 20:
        raise ParameterError(f"y must be >= 20, got {y}")
    if u_max <= 1 or step <= 0:
        raise ParameterError("need u_max > 1 and step > 0")
    x_top = int(y**u_max)
    if x_top > x_cap:
        raise ResourceError(f"y^u_max = {x_top} exceeds cap {x_cap}")

    primes = _primes_upto(x_top)
    logs = np.log(primes.astype(np.longdouble))
    fp = spec.prime_values(primes)
    cum_theta = np.cumsum(logs)
    cum_f = np.cumsum(fp * logs)

    n_cells = round((u_max - 1.0) / step)
    if abs(1.0 + n_cells * step - u_max) > 1e-9:
        raise ParameterError("step must divide u_max - 1")
    t_nodes = 1.0 + step * np.arange(1, n_cells + 1)
    idx = np.searchsorted(primes, np.floor(y**t_nodes).astype(np.int64),
                          side="right") - 1
    if np.any(idx < 0):
        raise ParameterError(f"no primes below y = {y}")
    samples = np.asarray(cum_f[idx] / cum_theta[idx], dtype=float)
    samples = np.clip(samples, 0.0, 1.0)

    breakpoints = tuple(1.0 + step * np.arange(n_cells))
    return ChiKernel(breakpoints=breakpoints, plateau_values=tuple(samples))


def verify_correspondence(spec: MultiplicativeSpec, y: float, u: float,
                          step: float = 0.05, c: float = 5.0,
                          solver_step: float = 2.0**-9,
                          x_cap: int = X_CAP_DEFAULT):
    """Compare the exact integer mean value at x = floor(y^u) with the
    integral-equation solution driven by the prime-measured kernel.

    Returns (lhs, rhs, error_budget) with budget c*(u/log y + y^-u).
    """
    x = int(y**u)
    lhs = mean_value(spec, x, x_cap=x_cap).mean
    kern = chi_from_f(spec, y, u, step, x_cap=x_cap)
    sol = solve_sigma(kern, u_max=u, step=solver_step)
    rhs = float(sol.sigma(u))
    budget = c * (u / math.log(y) + y**-u)
    return lhs, rhs, budget


def construction_theorem1(y: float, w: float, delta: float,
                          dickman: DickmanTable | None = None,
                          x_cap: int = X_CAP_DEFAULT):
    """Mean value of f with f(p)=0 on [y, y^w] at x = floor(y^(w+delta)),
    against its limiting prediction rho(w+D) + int_0^D rho(t)/(w+D-t) dt.

    The empirical count uses the decomposition: n with f(n)=1 is either
    y-smooth or n = p*m with a single prime p >= y^w and m y-smooth
    (delta <= w forces at most one such prime factor).  Returns
    (empirical, predicted).
    """
    from .bounds import lower_objective

    if not (0.0 <= delta <= w):
        raise ParameterError(f"need 0 <= delta <= w, got delta={delta}")
    x = int(y ** (w + delta))
    _check_cap(x, x_cap)

    # f(p)=0 on [y, y^w] inclusive, so the "small" primes are p < y and
    # the "large" ones p > y^w -- boundaries match prime_values exactly
    smooth = _smooth_indicator(x, math.nextafter(y, 0.0))
    cum = np.concatenate(([0], np.cumsum(smooth)))  # cum[m+1] = psi(m, y-)

    count = int(cum[x + 1])
    p_lo = y**w
    for p in _primes_upto(x):
        if p > p_lo:
            count += int(cum[x // p + 1])

    if dickman is None:
        dickman = build_dickman(max(2.0, w + delta), 2.0**-10)
    predicted = lower_objective(dickman, w, delta)
    return count / x, predicted


def theorem1_direct_count(y: float, w: float, delta: float,
                          x_cap: int = X_CAP_DEFAULT) -> int:
    """Independent counting path: sieve f(p)=0 on [y, y^w] directly and
    count n <= floor(y^(w+delta)) with f(n) = 1."""
    x = int(y ** (w + delta))
    _check_cap(x, x_cap)
    bad = np.zeros(x + 1, dtype=bool)
    bad[0] = True
    for p in _primes_upto(x):
        if y <= p <= y**w:
            bad[p::p] = True
    return int((~bad).sum())
