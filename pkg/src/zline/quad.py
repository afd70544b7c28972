"""Quadrature engine for the cosh-kernel line integrals.

Implements the exact representation

    F(t) = integral f(sigma+ix) * kernel(x - t, width 2*sigma-1) dx,
    Z(t) = Re F(t) / (sqrt(1/4+t^2) * sqrt(25/4+t^2))   (sigma = 4),

the general strip Poisson solver for harmonic functions with exponentially
bounded boundary data, and the staged approximations F1..F4 that bridge the
exact integral to the series representation.

Quadrature is the uniform trapezoid rule: the integrands extend
analytically to |Im x| < 1 (branch point of the phase factor at x = i), so
the discretization error decays like exp(-2 pi / step) and the tail
truncation, controlled by tail_eps, dominates.  Final reductions use
math.fsum, which keeps the huge-integrand cancellation in F exact to the
last bit; staged differences share their sample lattice so common terms
cancel exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _angles
from .errors import ConvergenceError, PhaseTrackError
from .phase import h_exact, l1, rho0, theta, theta_mod_2pi
from .special import ln_gamma, zeta_em, zeta_right

__all__ = [
    "QuadratureConfig",
    "StripProblem",
    "kernel",
    "omega_kernel",
    "strip_solve",
    "f_on_line",
    "f_integral",
    "f_integral_grid",
    "z_from_integral",
    "f_staged",
]

_LOG_2PI = 1.8378770664093454835606594728112352797
_MAX_WINDOW = 1.0e5


@dataclass(frozen=True)
class QuadratureConfig:
    """Trapezoid spacing, tail target and optional fixed half-window."""
    step: float = 0.125
    tail_eps: float = 1e-10
    window_override: float | None = None

    def __post_init__(self):
        if not 0.0 < self.step <= 0.25:
            raise ValueError("step must be in (0, 0.25]")
        if not 0.0 < self.tail_eps <= 1e-3:
            raise ValueError("tail_eps must be in (0, 1e-3]")
        if self.window_override is not None and self.window_override <= 0:
            raise ValueError("window_override must be positive")


_DEFAULT_CFG = QuadratureConfig()


@dataclass(frozen=True)
class StripProblem:
    """Dirichlet problem on the strip a < Re s < b.

    boundary_a/boundary_b evaluate the boundary data A(x) = u(a+ix),
    B(x) = u(b+ix); both must be O(e^{growth|x|}) with growth < pi/(b-a)
    or the boundary integrals diverge.
    """
    a: float
    b: float
    boundary_a: Callable[[np.ndarray], np.ndarray]
    boundary_b: Callable[[np.ndarray], np.ndarray]
    growth: float = 0.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("need a < b")
        if not 0.0 <= self.growth < math.pi / (self.b - self.a):
            raise ValueError("growth constant must lie in [0, pi/(b-a))")


def kernel(u, width: float = 7.0):
    """The smoothing kernel 1/(width*cosh(pi*u/width)).

    Written as 2 e^{-z}/(width (1+e^{-2z})), z = pi|u|/width, so large |u|
    underflows gracefully to 0 instead of overflowing cosh.
    """
    if not width > 0:
        raise ValueError("width must be positive")
    z = math.pi * np.abs(np.asarray(u, dtype=float)) / width
    with np.errstate(under="ignore"):
        e = np.exp(-z)
        out = 2.0 * e / (width * (1.0 + e * e))
    if np.ndim(u) == 0:
        return float(out)
    return out


def omega_kernel(sigma: float, t):
    """Strip Poisson kernel sin(pi sigma)/(cosh(pi t) - cos(pi sigma)).

    Evaluated as 2q sin(pi sigma)/(1 + q^2 - 2q cos(pi sigma)) with
    q = e^{-pi|t|}, an exact rewrite that never overflows.
    """
    if not 0.0 < sigma < 1.0:
        raise ValueError("omega_kernel requires sigma in (0,1)")
    with np.errstate(under="ignore"):
        q = np.exp(-math.pi * np.abs(np.asarray(t, dtype=float)))
        s, c = math.sin(math.pi * sigma), math.cos(math.pi * sigma)
        out = 2.0 * q * s / (1.0 + q * q - 2.0 * q * c)
    if np.ndim(t) == 0:
        return float(out)
    return out


def _trapz_fsum(y: np.ndarray, x: np.ndarray) -> complex:
    """Trapezoid rule with exactly rounded summation (complex y)."""
    cells = 0.5 * (y[:-1] + y[1:]) * np.diff(x)
    return complex(math.fsum(cells.real.tolist()),
                   math.fsum(cells.imag.tolist()))


def strip_solve(p: StripProblem, sigma: float, t: float,
                cfg: QuadratureConfig | None = None) -> float:
    """Value of the harmonic interpolant at sigma + i t inside the strip.

        u(sigma,t) = 1/(2w) int A(x) omega((sigma-a)/w, (x-t)/w) dx
                   + 1/(2w) int B(x) omega((b-sigma)/w, (x-t)/w) dx,

    w = b - a.  Window is chosen from the growth bound and tail_eps.
    """
    cfg = cfg or _DEFAULT_CFG
    if not p.a < sigma < p.b:
        raise ValueError("sigma must lie strictly inside the strip")
    w = p.b - p.a
    kappa = math.pi / w - p.growth  # net exponential decay rate in x
    # probe the boundary amplitude M = max |data| e^{-growth|x|}
    probe = t + np.linspace(-4.0 * w, 4.0 * w, 33)
    scale = np.exp(-p.growth * np.abs(probe))
    amp = max(float(np.max(np.abs(p.boundary_a(probe)) * scale)),
              float(np.max(np.abs(p.boundary_b(probe)) * scale)), 1e-300)
    if cfg.window_override is not None:
        half = cfg.window_override
    else:
        half = (math.log(4.0 * amp * (1.0 + math.exp(p.growth * abs(t))))
                + math.log(1.0 / (kappa * w * cfg.tail_eps))) / kappa
        half = max(half, 2.0 * w)
    if half > _MAX_WINDOW:
        raise ConvergenceError(f"strip window {half:.3g} exceeds {_MAX_WINDOW:g}")
    n = int(math.ceil(half / cfg.step))
    xs = t + cfg.step * np.arange(-n, n + 1)
    u = (xs - t) / w
    ya = np.asarray(p.boundary_a(xs), dtype=float) * omega_kernel((sigma - p.a) / w, u)
    yb = np.asarray(p.boundary_b(xs), dtype=float) * omega_kernel((p.b - sigma) / w, u)
    total = _trapz_fsum((ya + yb).astype(complex), xs)
    return total.real / (2.0 * w)


# ----------------------------------------------------------------------
# f on vertical lines


def _log_phi(s: np.ndarray) -> np.ndarray:
    """log Phi(s) via the functional-equation form

        Phi(s) = 2 (s+2) s (1-s) (3-s) (2pi)^{-s} cos(pi s/2) Gamma(s) zeta(s)^2,

    with log cos evaluated overflow-safely.  Valid for 0 < Re s < 5 away
    from s = 1 and the real zeros of the linear factors.
    """
    s = np.asarray(s, dtype=complex)
    z = 0.5 * math.pi * s
    # log cos z = -i z sgn + log1p(e^{2iz sgn}) - log 2, sgn matching Im z
    sgn = np.where(s.imag >= 0.0, 1.0, -1.0)
    logcos = -1j * sgn * z - math.log(2.0) + np.log1p(np.exp(2j * sgn * z))
    sig = s.real
    zeta = zeta_right(s) if np.all(sig >= 2.0) else zeta_em(s)
    return (math.log(2.0) + np.log(s + 2.0) + np.log(s) + np.log(1.0 - s)
            + np.log(3.0 - s) - s * _LOG_2PI + logcos + ln_gamma(s)
            + 2.0 * np.log(zeta))


def _track_sqrt(p_vals: np.ndarray, anchor: float) -> np.ndarray:
    """Assign signs to pointwise square roots so the result is continuous.

    p_vals[0] corresponds to the anchor abscissa; anchor is the known real
    value there.  A step is rejected when even the better sign choice is
    within 2 percent of the ambiguous half-turn.
    """
    r = p_vals[1:] / p_vals[:-1]
    ang = np.abs(np.angle(r))
    jump = np.minimum(ang, math.pi - ang)
    if np.any(jump > 0.49 * math.pi):
        bad = int(np.argmax(jump > 0.49 * math.pi))
        raise PhaseTrackError(
            f"square-root branch ambiguous between samples {bad} and {bad+1}; "
            "refine the tracking grid")
    flips = np.where(r.real < 0.0, -1.0, 1.0)
    start = 1.0 if anchor * p_vals[0].real >= 0 else -1.0
    signs = start * np.concatenate(([1.0], np.cumprod(flips)))
    return signs * p_vals


def _f_general_sorted(xs: np.ndarray, sigma: float) -> np.ndarray:
    """f(sigma+ix) for ascending xs >= 0 including a tracking path from 0."""
    step_cap = min(0.25, math.pi / (2.0 * (2.0 + 0.5 * math.log(
        max(float(xs[-1]), 20.0) / (2.0 * math.pi)))))
    path = np.unique(np.concatenate(
        [np.arange(0.0, float(xs[-1]) + step_cap, step_cap), xs]))
    if abs(sigma - 1.0) < 1e-9:
        # (1-s) zeta(s)^2 cos(pi s/2) is 0*inf at s=1; anchor with the limit
        anchor = -math.sqrt(3.0)
        vals = np.empty(path.size, dtype=complex)
        vals[0] = 1.0  # placeholder, overwritten below
        inner = np.exp(0.5 * _log_phi(sigma + 1j * path[1:]))
        tracked = _track_sqrt(np.concatenate(([anchor + 0j], inner)), anchor)
        vals = tracked
    else:
        p_vals = np.exp(0.5 * _log_phi(sigma + 1j * path))
        anchor_mag = math.exp(0.5 * float(_log_phi(np.array([sigma + 0j]))[0].real))
        anchor = -anchor_mag if sigma < 3.0 else anchor_mag
        p_vals[0] = anchor
        tracked = _track_sqrt(p_vals, anchor)
    pos = np.searchsorted(path, xs)
    return tracked[pos]


def f_on_line(x, sigma: float = 4.0):
    """f(sigma+ix) on the vertical line, for sigma in (1/2,5) except 3.

    sigma = 4 uses the factorization f = h(x) zeta(4+ix) directly; other
    sigma take the analytic square root of Phi, sign-tracked continuously
    from x = 0 where f(sigma) is real (negative left of 3, positive right).
    Scalars or arrays; f(sigma-ix) = conj f(sigma+ix).
    """
    if not 0.5 < sigma < 5.0 or abs(sigma - 3.0) < 1e-9:
        raise ValueError("sigma must lie in (1/2, 5) excluding 3")
    xx = np.atleast_1d(np.asarray(x, dtype=float))
    if sigma == 4.0:
        out = h_exact(xx) * zeta_right(4.0 + 1j * xx)
    else:
        ax = np.abs(xx)
        order = np.argsort(ax)
        vals_sorted = _f_general_sorted(ax[order], sigma)
        vals = np.empty_like(vals_sorted)
        vals[order] = vals_sorted
        out = np.where(xx < 0.0, np.conj(vals), vals)
    if np.ndim(x) == 0:
        return complex(out[0])
    return out


# ----------------------------------------------------------------------
# the exact integral F(t)


def _f_window(t: float, sigma: float, cfg: QuadratureConfig) -> float:
    """Half-window for the F integral: kernel decay pi/(2 sigma - 1) against
    polynomial growth of |f| ~ x^{2+(2 sigma-1)/4}, iterated once."""
    w = 2.0 * sigma - 1.0
    rate = math.pi / w
    grow = 2.0 + w / 4.0
    half = (math.log(1.0 / cfg.tail_eps) + 5.0) / rate
    for _ in range(2):
        half = (math.log(1.0 / cfg.tail_eps)
                + grow * math.log(abs(t) + half + math.e)
                + math.log(8.0 * (1.0 + w))) / rate
    if half > _MAX_WINDOW:
        raise ConvergenceError(f"F window {half:.3g} exceeds {_MAX_WINDOW:g}")
    return half


def f_integral(t: float, sigma: float = 4.0,
               cfg: QuadratureConfig | None = None) -> complex:
    """F(t) = int f(sigma+ix) kernel(x-t, 2 sigma-1) dx, exact representation.

    Re F(t) is independent of sigma and equals Z(t) sqrt(1/4+t^2)
    sqrt(25/4+t^2).  Negative t by reflection F(-t) = conj F(t).
    """
    cfg = cfg or _DEFAULT_CFG
    if t < 0.0:
        return complex(np.conj(f_integral(-t, sigma, cfg)))
    if cfg.window_override is not None:
        half = cfg.window_override
    else:
        half = _f_window(t, sigma, cfg)
    h = cfg.step
    n = int(math.ceil(half / h))
    xs = t + h * np.arange(-n, n + 1)
    y = f_on_line(xs, sigma) * kernel(xs - t, 2.0 * sigma - 1.0)
    return _trapz_fsum(y, xs)


def z_from_integral(t: float, cfg: QuadratureConfig | None = None) -> float:
    """Z(t) recovered exactly from the line integral at sigma = 4."""
    f = f_integral(t, 4.0, cfg)
    return f.real / (math.sqrt(0.25 + t * t) * math.sqrt(6.25 + t * t))


def f_integral_grid(ts: np.ndarray, sigma: float = 4.0,
                    cfg: QuadratureConfig | None = None) -> np.ndarray:
    """F(t) for an ascending array of t >= 0, sharing one sample grid.

    Used by the phase trackers: thousands of t values reuse a single
    evaluation of f on a common lattice.  Summation is numpy's pairwise
    reduction (deterministic for fixed shapes); the small loss of the fsum
    guarantee only perturbs tracked phases at the 1e-10 rad level.
    """
    cfg = cfg or _DEFAULT_CFG
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.empty(0, dtype=complex)
    if np.any(ts < 0.0) or np.any(np.diff(ts) < 0.0):
        raise ValueError("ts must be ascending and nonnegative")
    half = _f_window(float(ts[-1]), sigma, cfg)
    h = cfg.step
    lo = math.floor((ts[0] - half) / h)
    hi = math.ceil((ts[-1] + half) / h)
    xs = h * np.arange(lo, hi + 1)
    y = f_on_line(xs, sigma)
    width = 2.0 * sigma - 1.0
    out = np.empty(ts.size, dtype=complex)
    for start in range(0, ts.size, 256):
        tt = ts[start:start + 256, None]
        rows = y[None, :] * kernel(xs[None, :] - tt, width)
        out[start:start + 256] = h * (rows.sum(axis=1)
                                      - 0.5 * (rows[:, 0] + rows[:, -1]))
    return out


# ----------------------------------------------------------------------
# staged approximations F1..F4


def _window_nodes(center: float, lo: float, hi: float, h: float) -> np.ndarray:
    """Sample nodes on [lo, hi]: the step-h lattice through the center plus
    the exact interval endpoints when they fall between lattice points."""
    k_lo = int(math.ceil((lo - center) / h - 1e-12))
    k_hi = int(math.floor((hi - center) / h + 1e-12))
    nodes = center + h * np.arange(k_lo, k_hi + 1)
    if nodes[0] - lo > 1e-9:
        nodes = np.concatenate(([lo], nodes))
    if hi - nodes[-1] > 1e-9:
        nodes = np.concatenate((nodes, [hi]))
    return nodes


def _stage4_half(t: float, cfg: QuadratureConfig) -> float:
    """Full-line window for the bracket integrand L1 * zeta * kernel."""
    half = 7.0 / math.pi * (math.log(1.0 / cfg.tail_eps) + 3.0)
    for _ in range(2):
        l1_amp = float(np.max(np.abs(l1(np.array([half]), t))))
        half = 7.0 / math.pi * (math.log(1.0 / cfg.tail_eps)
                                + math.log(8.0 * 1.1 * max(l1_amp, 1.0)))
    if half > _MAX_WINDOW:
        raise ConvergenceError("stage-4 window exceeded the cap")
    return half


def f_staged(t: float, stage: int, cfg: QuadratureConfig | None = None) -> complex:
    """Staged approximations of F(t) for t >= 20.

    stage 1: the exact integrand restricted to the window |x-t| <= (28/pi) log t
    stage 2: same window, f(4+ix) replaced by rho0(x) e^{i theta(x)} zeta(4+ix)
    stage 3: shifted form  e^{i theta(t)} rho0(t) *
             int_{|x| <= (28/pi) log t} L1(x,t) (t/2pi)^{ix/2} zeta(4+it+ix) kernel(x) dx
    stage 4: the stage-3 integrand over the full line

    Stages 1/2 and 3/4 share their sample lattices with f_integral and with
    each other, so differences between consecutive stages are free of
    cancellation noise.
    """
    cfg = cfg or _DEFAULT_CFG
    if t < 20.0:
        raise ValueError("f_staged requires t >= 20")
    if stage not in (1, 2, 3, 4):
        raise ValueError("stage must be 1..4")
    h = cfg.step
    half1 = 28.0 / math.pi * math.log(t)
    if stage in (1, 2):
        # the stage-2 substitute needs x >= 10; clip (active only for t < 45)
        xs = _window_nodes(t, max(t - half1, 10.0), t + half1, h)
        zeta = zeta_right(4.0 + 1j * xs)
        if stage == 1:
            y = h_exact(xs) * zeta * kernel(xs - t)
        else:
            y = rho0(xs) * np.exp(1j * theta(xs)) * zeta * kernel(xs - t)
        return _trapz_fsum(y, xs)

    half = half1 if stage == 3 else max(_stage4_half(t, cfg), half1)
    us = _window_nodes(0.0, -half, half, h)
    beta = 0.5 * (_angles.log_ld(t) - _angles.LOG_2PI)
    osc_ph = _angles.reduce_mod_2pi(beta * _angles.as_ld(us))
    y = (l1(us, t) * (np.cos(osc_ph) + 1j * np.sin(osc_ph))
         * zeta_right(4.0 + 1j * (t + us)) * kernel(us))
    integral = _trapz_fsum(y, us)
    th_t = theta_mod_2pi(t)
    pref = rho0(t) * complex(math.cos(th_t), math.sin(th_t))
    return pref * integral
