"""Type-B Eulerian polynomials, cosh-kernel Fourier moments, and the
Dirichlet-type series H_r(t) with the final Z approximation.

The chain: the r-th derivative of sech(y) is (-1)^r 2e^{-y} B_r(-e^{-2y})
/ (1+e^{-2y})^{r+1} with B_r the type-B Eulerian polynomial (integer
coefficients, OEIS A060187).  Fourier moments of the kernel follow by
differentiating the classical cosh transform, and expanding zeta(4+it+ix)
termwise under the moment integral gives

    H_r(t) = (7i/2)^r  sum_n  n^{-4-it} m_r(y_n),
    y_n = (7/4) log(t / (2 pi n^2)),

where m_r is the sech derivative factor above.  The leading series H = H_0
drives the approximation Z(t) ~ (t/2pi)^{7/4} Re{e^{i theta(t)} H(t)}, and
g_series assembles the full bracket of H_0..H_4 that mirrors the L1
polynomial of the staged integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _angles
from .errors import ConvergenceError
from .phase import rho0, theta_mod_2pi
from .special import _vartheta_ld

__all__ = [
    "EulerianB",
    "SeriesTolerance",
    "eulerian_b",
    "fourier_cosh_moment",
    "h_r_series",
    "h_r_series_info",
    "h_series",
    "h_series_info",
    "h_series_grid",
    "z_approx",
    "g_series",
]

_LOG_2PI = 1.8378770664093454835606594728112352797


@dataclass(frozen=True)
class SeriesTolerance:
    """Absolute tail target for the H_r series and a term-count safety cap."""
    eps: float = 1e-10
    n_cap: int = 500_000

    def __post_init__(self):
        if not 0.0 < self.eps <= 1e-3:
            raise ValueError("eps must be in (0, 1e-3]")
        if self.n_cap < 16:
            raise ValueError("n_cap must be at least 16")


_DEFAULT_TOL = SeriesTolerance()


@dataclass(frozen=True)
class EulerianB:
    """Exact integer coefficients of B_n, ascending powers, degree n."""
    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError("coefficient count must be n + 1")

    def value(self, x):
        """Polynomial value at x (float arithmetic), scalars or arrays."""
        acc = np.zeros_like(np.asarray(x, dtype=float))
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return float(acc) if np.ndim(acc) == 0 else acc


@lru_cache(maxsize=None)
def eulerian_b(n: int) -> EulerianB:
    """B_n by the recurrence B_n = 2x(1-x)B'_{n-1} + (1+(2n-1)x)B_{n-1},
    starting from B_0 = 1; exact integer arithmetic, n <= 64."""
    if not 0 <= n <= 64:
        raise ValueError("eulerian_b supports 0 <= n <= 64")
    if n == 0:
        return EulerianB(0, (1,))
    prev = eulerian_b(n - 1).coeffs
    out = [0] * (n + 1)
    for k, c in enumerate(prev):
        if k:
            out[k] += 2 * k * c          # 2x * B'
            out[k + 1] -= 2 * k * c      # -2x^2 * B'
        out[k] += c
        out[k + 1] += (2 * n - 1) * c
    return EulerianB(n, tuple(out))


def _b_at_minus(r: int, u):
    """B_r(-u) by Horner; u scalar or array."""
    acc = np.zeros_like(np.asarray(u, dtype=float))
    for c in reversed(eulerian_b(r).coeffs):
        acc = acc * (-u) + c
    return acc


def _m_r(y, r: int):
    """(-1)^r (d/dy)^r sech(y), the moment factor.

    Evaluated after reflection to y >= 0 (m_r(-y) = (-1)^r m_r(y), since
    sech is even), so u = e^{-2|y|} <= 1 and nothing overflows at any y.
    """
    y = np.asarray(y, dtype=float)
    ay = np.abs(y)
    with np.errstate(under="ignore"):
        u = np.exp(-2.0 * ay)
        val = 2.0 * np.exp(-ay) * _b_at_minus(r, u) / (1.0 + u) ** (r + 1)
    if r % 2:
        val = np.where(y < 0.0, -val, val)
    return val


def fourier_cosh_moment(n: int, alpha):
    """Closed form of  int e^{i alpha x} x^n / (7 cosh(pi x/7)) dx:

        (7i/2)^n * 2 e^{-y} B_n(-e^{-2y}) / (1+e^{-2y})^{n+1},   y = 7 alpha/2.

    Scalars or arrays in alpha; overflow-safe for any alpha via the
    reflection in m_n (the printed form would overflow past |y| ~ 300).
    """
    if not 0 <= n <= 16:
        raise ValueError("fourier_cosh_moment supports 0 <= n <= 16")
    val = (3.5j) ** n * _m_r(3.5 * np.asarray(alpha, dtype=float), n)
    if np.ndim(alpha) == 0:
        return complex(val)
    return val


@lru_cache(maxsize=None)
def _tail_const(r: int) -> float:
    """C_r with |B_r(-u)| <= C_r (1+u)^r for all u >= 0.

    g(u) = |B_r(-u)|/(1+u)^r satisfies g(1/u) = g(u) by palindromicity, so
    the max over [0,1] is already the global sup; fine grid + 0.1% headroom.
    """
    u = np.linspace(0.0, 1.0, 4001)
    g = np.abs(_b_at_minus(r, u)) / (1.0 + u) ** r
    return float(np.max(g)) * 1.001


def _tail_bound(t: float, r: int, n_terms: int) -> float:
    """2 C_r (7/2)^r (t/2pi)^{7/4} sum_{n>N} n^{-15/2}, the sum bounded by
    its integral N^{-13/2}/6.5."""
    lead = 2.0 * _tail_const(r) * 3.5 ** r * (t / (2.0 * math.pi)) ** 1.75
    return lead * n_terms ** -6.5 / 6.5


def _n_terms(t: float, r: int, tol: SeriesTolerance) -> int:
    """Smallest N whose tail bound is below tol.eps."""
    lead = 2.0 * _tail_const(r) * 3.5 ** r * (t / (2.0 * math.pi)) ** 1.75
    return max(math.ceil((lead / (6.5 * tol.eps)) ** (2.0 / 13.0)), 1)


def h_r_series_info(t: float, r: int,
                    tol: SeriesTolerance | None = None
                    ) -> tuple[complex, int, float]:
    """h_r_series plus its term count and the tail bound actually achieved."""
    tol = tol or _DEFAULT_TOL
    if not t > 0.0:
        raise ValueError("h_r_series requires t > 0")
    if not 0 <= r <= 8:
        raise ValueError("h_r_series supports 0 <= r <= 8")
    n_terms = _n_terms(t, r, tol)
    if n_terms > tol.n_cap:
        raise ConvergenceError(
            f"H_{r}({t:g}) needs {n_terms} terms, above the cap {tol.n_cap}")
    n = np.arange(1, n_terms + 1, dtype=float)
    # cancellation-free form of y_n = (7/4) log(t/(2 pi n^2))
    y = 1.75 * (math.log(t) - _LOG_2PI - 2.0 * np.log(n))
    amp = n ** -4.0 * _m_r(y, r)
    ph = _angles.reduce_mod_2pi(-_angles.as_ld(t) * _angles.log_ld(n))
    value = (3.5j) ** r * complex(math.fsum((amp * np.cos(ph)).tolist()),
                                  math.fsum((amp * np.sin(ph)).tolist()))
    return value, n_terms, _tail_bound(t, r, n_terms)


def h_r_series(t: float, r: int, tol: SeriesTolerance | None = None) -> complex:
    """H_r(t) = (7i/2)^r sum_n n^{-4-it} m_r(y_n), truncated at the first N
    whose proven tail bound drops below tol.eps.

    Phases of n^{-it} are reduced mod 2pi in extended precision; the real
    and imaginary sums are exactly rounded (fsum), so the result is
    deterministic and independent of summation order.
    """
    value, _, _ = h_r_series_info(t, r, tol)
    return value


def h_series(t: float, tol: SeriesTolerance | None = None) -> complex:
    """H(t) = H_0(t): term factor 2/((t/2pi n^2)^{7/4} + (t/2pi n^2)^{-7/4}),
    which is exactly sech(y_n) and is evaluated in that stable form."""
    value, _, _ = h_r_series_info(t, 0, tol)
    return value


def h_series_info(t: float, tol: SeriesTolerance | None = None
                  ) -> tuple[complex, int, float]:
    """H(t) with its term count and reported tail bound."""
    return h_r_series_info(t, 0, tol)


def h_series_grid(ts, tol: SeriesTolerance | None = None) -> np.ndarray:
    """H(t) over an array of t > 0, sharing one term range (sized for the
    largest t).

    Summation is numpy's pairwise reduction over a fixed shape: deterministic,
    and the fsum guarantee of the scalar route is not needed for
    tracking-grade phases.  Chunked to bound memory.
    """
    tol = tol or _DEFAULT_TOL
    ts = np.asarray(ts, dtype=float)
    if ts.size == 0:
        return np.empty(0, dtype=complex)
    if np.any(ts <= 0.0):
        raise ValueError("h_series_grid requires t > 0")
    n_terms = _n_terms(float(np.max(ts)), 0, tol)
    if n_terms > tol.n_cap:
        raise ConvergenceError(
            f"H grid needs {n_terms} terms, above the cap {tol.n_cap}")
    n = np.arange(1, n_terms + 1, dtype=float)
    log_n = np.log(n)
    log_n_ld = _angles.log_ld(n)
    inv_n4 = n ** -4.0
    out = np.empty(ts.size, dtype=complex)
    for start in range(0, ts.size, 1024):
        tt = ts[start:start + 1024]
        y = 1.75 * (np.log(tt)[:, None] - _LOG_2PI - 2.0 * log_n[None, :])
        amp = inv_n4[None, :] * _m_r(y, 0)
        ph = _angles.reduce_mod_2pi(
            -_angles.as_ld(tt)[:, None] * log_n_ld[None, :])
        rows = amp * (np.cos(ph) + 1j * np.sin(ph))
        out[start:start + 1024] = rows.sum(axis=1)
    return out


def z_approx(t: float, tol: SeriesTolerance | None = None,
             phase: str = "theta") -> float:
    """(t/2pi)^{7/4} Re{e^{i phase} H(t)}, the series approximation to Z(t).

    phase "theta" is the consolidated phase (the convention the value table
    follows); "vartheta" substitutes the classical Riemann-Siegel theta,
    which differs by 2pi + O(1/t) and so agrees only asymptotically.
    """
    if t < 10.0:
        raise ValueError("z_approx requires t >= 10")
    if phase == "theta":
        ph = theta_mod_2pi(t)
    elif phase == "vartheta":
        ph = float(_angles.reduce_mod_2pi(_vartheta_ld(t)))
    else:
        raise ValueError("phase must be 'theta' or 'vartheta'")
    h = h_series(t, tol)
    return (t / (2.0 * math.pi)) ** 1.75 * (
        math.cos(ph) * h.real - math.sin(ph) * h.imag)


def g_series(t: float, tol: SeriesTolerance | None = None) -> complex:
    """The series route to the full-line staged integral (stage 4):

        e^{i theta} rho0 (H0 + 15H1/4t + iH2/4t + 165H2/32t^2
                          + 241iH1/24t^2 + 41iH3/48t^2 - H4/32t^2),

    the bracket mirroring the L1 polynomial with x^r replaced by H_r.
    Exists to cross-validate the integral and series representations, not
    as a production evaluator.
    """
    if t < 20.0:
        raise ValueError("g_series requires t >= 20")
    h = [h_r_series(t, r, tol) for r in range(5)]
    t2 = t * t
    bracket = (h[0]
               + 15.0 * h[1] / (4.0 * t) + 1j * h[2] / (4.0 * t)
               + 165.0 * h[2] / (32.0 * t2) + 241j * h[1] / (24.0 * t2)
               + 41j * h[3] / (48.0 * t2) - h[4] / (32.0 * t2))
    ph = theta_mod_2pi(t)
    return rho0(t) * complex(math.cos(ph), math.sin(ph)) * bracket
