import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from unsieved.dickman import EXP_GAMMA, rho
from unsieved.kernel import (DICKMAN_KERNEL, IDENTITY_KERNEL, ChiKernel,
                             KernelError, compute_B, compute_E,
                             laplace_identity_rhs, laplace_sigma, log_E,
                             perturb_sigma, sandwich_bounds,
                             sandwich_tolerance, series_I, solve_sigma,
                             step_kernel)

STEP = 2.0**-9


@st.composite
def kernels(draw):
    n = draw(st.integers(min_value=1, max_value=5))
    extra = sorted(draw(st.lists(
        st.floats(min_value=1.001, max_value=9.0), min_size=n - 1,
        max_size=n - 1, unique=True)))
    vals = draw(st.lists(st.floats(min_value=0.0, max_value=1.0),
                         min_size=n, max_size=n))
    return ChiKernel((1.0, *extra), tuple(vals))


def test_parse_serialize_roundtrip():
    k = ChiKernel((1.0, 2.5, 4.0), (0.25, 1.0, 0.0))
    k2 = ChiKernel.parse(k.serialize())
    assert k2.breakpoints == k.breakpoints
    assert k2.plateau_values == k.plateau_values


def test_parse_implicit_leading_plateau():
    k = ChiKernel.parse("2.0 0.5\n")
    assert k.chi(1.5) == 1.0
    assert k.chi(3.0) == 0.5


def test_parse_rejects_bad_input():
    with pytest.raises(KernelError):
        ChiKernel.parse("")
    with pytest.raises(KernelError):
        ChiKernel.parse("1 1.5\n")      # value outside [0,1]
    with pytest.raises(KernelError):
        ChiKernel.parse("1 0.5 extra\n")


def test_chi_evaluation():
    k = step_kernel(1.5)
    assert k.chi(0.5) == 1.0
    assert k.chi(1.2) == 0.0
    assert k.chi(2.0) == 1.0


def test_identity_kernel_solution_is_one():
    sol = solve_sigma(IDENTITY_KERNEL, u_max=5.0, step=STEP)
    assert np.max(np.abs(sol.sigma_values - 1.0)) == 0.0


def test_dickman_kernel_matches_rho(dickman_std):
    sol = solve_sigma(DICKMAN_KERNEL, u_max=5.0, step=STEP)
    grid = sol.grid
    err = np.abs(sol.sigma_values - rho(dickman_std, grid))
    assert err.max() <= 1e-6


def test_step_kernel_closed_form():
    # with chi vanishing on [1, w], sigma(2w) = 1 - log w + (log w)^2/2
    for w in (1.25, 1.5):
        sol = solve_sigma(step_kernel(w), u_max=2.0 * w + 0.1, step=STEP)
        lw = math.log(w)
        assert abs(sol.sigma(2.0 * w)
                   - (1.0 - lw + lw * lw / 2.0)) < 1e-6


def test_E_and_B_against_quadrature():
    k = ChiKernel((1.0, 2.0, 3.5), (0.3, 0.8, 0.1))
    for u in (0.5, 1.7, 2.9, 4.2):
        e_quad = math.exp(quad(lambda t: (1.0 - k.chi(t)) / t,
                               1.0, max(u, 1.0))[0]) if u > 1 else 1.0
        b_quad = quad(k.chi, 0.0, u, points=[1.0, 2.0, 3.5])[0]
        assert abs(compute_E(k, u) - e_quad) < 1e-9
        assert abs(compute_B(k, u) - b_quad) < 1e-9


def test_first_series_term_is_log_E():
    k = ChiKernel((1.0, 2.2), (0.4, 0.9))
    for u in (1.5, 3.0, 4.5):
        assert abs(series_I(k, u, 1, STEP) - log_E(k, u)) < 1e-8


def test_sandwich_brackets_solution():
    k = ChiKernel((1.0, 1.8, 3.0), (0.2, 0.7, 0.5))
    sol = solve_sigma(k, u_max=4.0, step=STEP)
    sig = sol.sigma(3.0)
    for n in (0, 2, 4):
        lo, hi = sandwich_bounds(k, 3.0, n, STEP)
        tol = sandwich_tolerance(k, 3.0, n, STEP)
        assert lo - tol <= sig <= hi + tol
    lo0, hi0 = sandwich_bounds(k, 3.0, 0, STEP)
    lo4, hi4 = sandwich_bounds(k, 3.0, 4, STEP)
    assert hi4 <= hi0 + 1e-12 and lo4 >= lo0 - 1e-12


def test_laplace_identity():
    k = ChiKernel((1.0, 2.5), (0.6, 0.2))
    sol = solve_sigma(k, u_max=48.0, step=2.0**-8)
    for s in (0.5, 1.0, 2.0):
        assert abs(laplace_sigma(sol, s)
                   - laplace_identity_rhs(k, s)) < 1e-6


def test_perturbation_recovers_direct_solve():
    base = solve_sigma(IDENTITY_KERNEL, u_max=4.0, step=STEP)
    est, remainder = perturb_sigma(base, DICKMAN_KERNEL, 3.0,
                                   truncation=12, step=2.0**-8)
    direct = solve_sigma(DICKMAN_KERNEL, u_max=4.0, step=STEP).sigma(3.0)
    assert abs(est - direct) <= remainder + 1e-5


def test_hall_and_dickman_bounds_random_kernel(dickman_std):
    k = ChiKernel((1.0, 2.0, 5.0), (0.5, 0.9, 0.3))
    sol = solve_sigma(k, u_max=6.0, step=STEP)
    grid, sig = sol.grid, sol.sigma_values
    mask = grid > 0
    assert np.all(sig[mask] <= EXP_GAMMA / sol.E_values[mask] + 1e-6)
    assert np.all(sig >= rho(dickman_std, sol.E_values) - 1e-6)


@settings(max_examples=30, deadline=None)
@given(kernels(), st.floats(min_value=0.0, max_value=8.0),
       st.floats(min_value=0.0, max_value=8.0))
def test_E_B_invariants(k, t, y):
    t, y = sorted((t, y))
    et, ey = compute_E(k, t), compute_E(k, y)
    bt, by = compute_B(k, t), compute_B(k, y)
    assert 1.0 <= et <= ey + 1e-12           # E nondecreasing, >= 1
    assert ey <= max(y, 1.0) + 1e-9          # E(u) <= u for u >= 1
    assert -1e-12 <= by - bt <= y - t + 1e-9  # B 1-Lipschitz, nondecreasing
    # mass lower bound B(y) >= y / E(y)
    assert by >= y / ey - 1e-9


@settings(max_examples=15, deadline=None)
@given(kernels())
def test_solution_in_unit_interval(k):
    sol = solve_sigma(k, u_max=4.0, step=2.0**-7)
    assert np.all(sol.sigma_values >= 0.0)
    assert np.all(sol.sigma_values <= 1.0)
