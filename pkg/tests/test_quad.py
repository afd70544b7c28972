"""Quadrature layer: the smoothing kernel, the strip Poisson solver, f on
vertical lines, the exact integral representation of Z, and the staged
approximations."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zline import (
    ConvergenceError,
    QuadratureConfig,
    StripProblem,
    f_integral,
    f_integral_grid,
    f_on_line,
    f_staged,
    h_exact,
    kernel,
    omega_kernel,
    strip_solve,
    z_from_integral,
    z_oracle,
    zeta_right,
)


# ------------------------------------------------------------------ kernel

def test_kernel_closed_points():
    assert kernel(0.0) == 1.0 / 7.0
    assert abs(kernel(7.0) - 1.0 / (7.0 * math.cosh(math.pi))) < 1e-17


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.0, max_value=500.0, allow_nan=False))
def test_kernel_even_and_positive(u):
    assert kernel(u) == kernel(-u)
    assert kernel(u) > 0.0 or u > 300.0  # underflows to 0 only far out


def test_kernel_width_guard():
    with pytest.raises(ValueError):
        kernel(1.0, width=0.0)


# ------------------------------------------------------------ omega kernel

def test_omega_closed_points():
    assert abs(omega_kernel(0.5, 2.0) - 1.0 / math.cosh(2.0 * math.pi)) < 1e-18
    # cos(pi/2) rounds to 6.1e-17, not zero, so the ratio is 1 + 1 ulp
    assert abs(omega_kernel(0.5, 0.0) - 1.0) <= 1e-15
    assert abs(omega_kernel(0.25, 0.0) - 1.0 / math.tan(math.pi / 8.0)) < 1e-15


def test_omega_domain():
    for sigma in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(ValueError):
            omega_kernel(sigma, 1.0)


# ------------------------------------------------------------- strip solve

def _const(c):
    return lambda x: c * np.ones_like(np.asarray(x, dtype=float))


def test_strip_harmonic_oscillatory():
    # u(sigma,t) = e^sigma cos t is harmonic and bounded in t
    p = StripProblem(1.0, 5.0,
                     lambda x: math.e * np.cos(np.asarray(x, dtype=float)),
                     lambda x: math.e ** 5 * np.cos(np.asarray(x, dtype=float)))
    assert abs(strip_solve(p, 2.0, 0.7) - math.e ** 2 * math.cos(0.7)) <= 1e-8


def test_strip_harmonic_constant():
    p = StripProblem(1.0, 5.0, _const(1.0), _const(1.0))
    assert abs(strip_solve(p, 3.0, 0.4) - 1.0) <= 1e-10


def test_strip_harmonic_linear():
    p = StripProblem(1.0, 5.0, _const(1.0), _const(5.0))
    assert abs(strip_solve(p, 2.5, -0.3) - 2.5) <= 1e-8


def test_strip_window_guard():
    # growth just below the divergence threshold forces an absurd window
    p = StripProblem(0.0, 1.0, _const(1.0), _const(1.0),
                     growth=math.pi - 1e-7)
    with pytest.raises(ConvergenceError):
        strip_solve(p, 0.5, 0.0)


def test_strip_problem_validation():
    with pytest.raises(ValueError):
        StripProblem(5.0, 1.0, _const(1.0), _const(1.0))
    with pytest.raises(ValueError):
        StripProblem(0.0, 1.0, _const(1.0), _const(1.0), growth=math.pi)
    p = StripProblem(1.0, 5.0, _const(1.0), _const(1.0))
    with pytest.raises(ValueError):
        strip_solve(p, 5.5, 0.0)  # outside the strip


# --------------------------------------------------------------- f on line

def test_f_on_line_sigma_two():
    # f(2) = -(2/pi) zeta(2) = -pi/3
    assert abs(f_on_line(0.0, sigma=2.0) + math.pi / 3.0) < 1e-10


def test_f_on_line_sigma_four_factorization():
    assert abs(f_on_line(0.0, sigma=4.0)
               - h_exact(0.0) * zeta_right(4.0 + 0j)) < 1e-14
    v = f_on_line(17.0, sigma=4.0)
    ref = h_exact(17.0) * zeta_right(4.0 + 17.0j)
    assert abs(v - ref) / abs(ref) < 1e-12


def test_f_on_line_conjugate():
    for sigma in (2.0, 4.0):
        assert abs(f_on_line(-13.0, sigma=sigma)
                   - np.conj(f_on_line(13.0, sigma=sigma))) < 1e-12


def test_f_on_line_domain():
    for sigma in (0.5, 3.0, 5.0):
        with pytest.raises(ValueError):
            f_on_line(1.0, sigma=sigma)


# ------------------------------------------------------------- config types

def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(step=0.3)
    with pytest.raises(ValueError):
        QuadratureConfig(step=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(tail_eps=1e-2)
    with pytest.raises(ValueError):
        QuadratureConfig(tail_eps=0.0)


# ------------------------------------------------------------ the integral

def test_f_integral_at_zero():
    # Re F(0) = sqrt(1/4) sqrt(25/4) Z(0) = (5/4) zeta(1/2)
    assert abs(f_integral(0.0).real - 1.25 * z_oracle(0.0)) < 1e-10


def test_z_from_integral_matches_reference():
    assert abs(z_from_integral(10.0) - -1.5491945) <= 1e-7
    assert abs(z_from_integral(100.0) - 2.6926971) <= 1e-7


def test_z_from_integral_at_zero():
    assert abs(z_from_integral(0.0) - z_oracle(0.0)) <= 1e-8


def test_step_halving_convergence():
    a = z_from_integral(50.0)
    b = z_from_integral(50.0, QuadratureConfig(step=0.0625))
    assert abs(a - b) <= 1e-10


def test_sigma_independence():
    for t in (20.0, 60.0):
        vals = [f_integral(t, sigma).real for sigma in (1.5, 2.5, 4.0)]
        assert max(vals) - min(vals) <= 1e-7


def test_f_integral_grid_matches_scalar():
    ts = np.array([10.0, 25.0, 40.0])
    grid_vals = f_integral_grid(ts, 4.0, None)
    for t, v in zip(ts, grid_vals):
        ref = f_integral(float(t))
        assert abs(v - ref) <= 1e-9 * abs(ref)


# ---------------------------------------------------------- staged chain

def test_staged_chain_at_hundred():
    # frozen calibration (2026-08): q = 0.023, 0.049, 1.5e-5, 1.75
    cfg = QuadratureConfig(step=0.125, tail_eps=1e-18)
    t = 100.0
    F = f_integral(t, 4.0, cfg)
    F1, F2, F3, F4 = (f_staged(t, k, cfg) for k in (1, 2, 3, 4))
    lg = math.log(t)
    assert t ** 0.25 * abs(F - F1) <= 0.05
    assert t ** -0.75 * abs(F1 - F2) <= 0.1
    assert t ** -0.75 * lg ** -6 * abs(F2 - F3) <= 1e-4
    assert t ** 1.25 / lg * abs(F3 - F4) <= 8.0


def test_staged_tail_collapse():
    cfg = QuadratureConfig(step=0.125, tail_eps=1e-18)
    assert abs(f_staged(1e3, 3, cfg) - f_staged(1e3, 4, cfg)) <= 1e-2


def test_staged_stage_guard():
    with pytest.raises(ValueError):
        f_staged(100.0, 5)
    with pytest.raises(ValueError):
        f_staged(100.0, 0)
    with pytest.raises(ValueError):
        f_staged(15.0, 1)
