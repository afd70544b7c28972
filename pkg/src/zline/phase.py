"""The phase factor h(x) = rho(x) e^{i alpha(x)} and its asymptotics.

h is the smooth factor relating the integrand on the line Re s = 4 to the
zeta function there: f(4+ix) = h(x) zeta(4+ix).  This module evaluates h
exactly from a sum of principal logarithms (overflow-safe for |x| up to
~1e8), the asymptotic expansions of log rho and of the continuous phase
alpha, and the truncated large-t functions theta(t), rho0(t) and the
correction polynomial L1(x,t) used by the staged approximations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _angles
from .special import ln_gamma

__all__ = [
    "PhasePolar",
    "AsymptoticSeries",
    "LOG_RHO_SERIES",
    "ALPHA_SERIES",
    "h_exact",
    "h_polar",
    "log_rho_asymptotic",
    "alpha_asymptotic",
    "theta",
    "theta_mod_2pi",
    "rho0",
    "l1",
]

_LOG_2PI = 1.8378770664093454835606594728112352797
_SQRT2_OVER_4PI2 = math.sqrt(2.0) / (4.0 * math.pi ** 2)


@dataclass(frozen=True)
class PhasePolar:
    """Polar form of h: modulus rho > 0 and the continuous phase alpha,
    normalized so that alpha(0) = 0."""
    rho: float
    alpha: float

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")


@dataclass(frozen=True)
class AsymptoticSeries:
    """Constant + log-term + finite inverse-power tail of an expansion.

    value(x, order) = constant + log_coef*log(x) + linear_coef*x*(log(x) - log 2pi - 1)/...
    is left to the callers; this container only fixes the printed
    coefficients so tests can assert them exactly.
    """
    constant: float
    log_coef: float
    powers: tuple[int, ...]          # inverse powers x^-p, ascending p
    coefs: tuple[float, ...]         # matching coefficients

    def tail(self, x, order: int):
        """Sum of the first `order` inverse-power terms at x."""
        if not 0 <= order <= len(self.coefs):
            raise ValueError(f"order must be in 0..{len(self.coefs)}")
        total = np.zeros_like(np.asarray(x, dtype=float))
        for p, c in zip(self.powers[:order], self.coefs[:order]):
            total = total + c * np.asarray(x, dtype=float) ** -p
        return total


#: log rho(x) = -7/4 log 2pi + 15/4 log x + 19/x^2 - 433/(2x^4) + ...
LOG_RHO_SERIES = AsymptoticSeries(
    constant=-1.75 * _LOG_2PI,
    log_coef=3.75,
    powers=(2, 4, 6, 8),
    coefs=(19.0, -433.0 / 2.0, 13069.0 / 3.0, -439633.0 / 4.0),
)

#: alpha(x) = x/2 log(x/2pi) - x/2 + 15pi/8 - 241/(24x) + ...
ALPHA_SERIES = AsymptoticSeries(
    constant=15.0 * math.pi / 8.0,
    log_coef=0.0,
    powers=(1, 3, 5),
    coefs=(-241.0 / 24.0, 41279.0 / 720.0, -2348641.0 / 2520.0),
)

#: Bernoulli numbers B_2..B_8 appearing in the alpha expansion's derivation
BERNOULLI_EVEN = (1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0)


def _log_l(x):
    """The continuous logarithm L(x) with h = (sqrt2/(2pi)^2) exp(L/2).

    Sum of principal logs of the linear factors (6+ix)(4+ix)(3+ix)^2(2+ix)
    (1+ix)^2, the rotation (2pi)^-ix, log cosh(pi x/2) - log 2 in
    overflow-safe form, and log Gamma(1+ix).  Every factor stays clear of
    the negative real axis for real x, so no branch tracking is needed and
    Im L is automatically the continuous phase with Im L(0) = 0.
    """
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    ix = 1j * x
    val = (np.log(6.0 + ix) + np.log(4.0 + ix) + 2.0 * np.log(3.0 + ix)
           + np.log(2.0 + ix) + 2.0 * np.log(1.0 + ix)
           - ix * _LOG_2PI
           + (0.5 * math.pi * ax + np.log1p(np.exp(-math.pi * ax)) - math.log(2.0))
           + ln_gamma(1.0 + ix))
    return val


def h_exact(x):
    """h(x), exact for any real x; scalars or arrays.

    Modulus grows only like x^{15/4}, so the value itself never overflows
    for |x| up to ~1e8 even though individual factors (cosh, Gamma) would.
    """
    val = _SQRT2_OVER_4PI2 * np.exp(0.5 * _log_l(x))
    if np.ndim(x) == 0:
        return complex(val)
    return np.asarray(val, dtype=complex)


def h_polar(x: float) -> PhasePolar:
    """Polar decomposition of h with the continuous alpha (alpha(0) = 0)."""
    val = complex(_log_l(x))
    return PhasePolar(rho=_SQRT2_OVER_4PI2 * math.exp(0.5 * val.real),
                      alpha=0.5 * val.imag)


def log_rho_asymptotic(x, order: int = 4):
    """Asymptotic log|h(x)| for x >= 10; `order` inverse-power terms (<= 4).

    With order 4 the next omitted term is below 1e-10 already at x = 30.
    Scalars or arrays.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 10.0):
        raise ValueError("log_rho_asymptotic requires x >= 10")
    s = LOG_RHO_SERIES
    out = s.constant + s.log_coef * np.log(x) + s.tail(x, order)
    return float(out) if np.ndim(out) == 0 else out


def alpha_asymptotic(x, order: int = 3):
    """Asymptotic continuous phase of h(x) for x >= 10; order <= 3 terms."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 10.0):
        raise ValueError("alpha_asymptotic requires x >= 10")
    s = ALPHA_SERIES
    out = (0.5 * x * (np.log(x) - _LOG_2PI) - 0.5 * x + s.constant
           + s.tail(x, order))
    return float(out) if np.ndim(out) == 0 else out


def theta(t):
    """The consolidated phase theta(t) = t/2 log(t/2pi) - t/2 + 15pi/8
    - 241/(24t); the one-term truncation of the alpha expansion."""
    if np.any(np.asarray(t, dtype=float) < 10.0):
        raise ValueError("theta requires t >= 10 (1/t term degrades below)")
    return alpha_asymptotic(t, order=1)


def theta_mod_2pi(t):
    """theta(t) reduced mod 2pi, computed in extended precision.

    The raw value reaches ~1e9 rad by t ~ 1e8; double evaluation would lose
    the phase long before that.  Scalars or arrays; result is float64.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 10.0):
        raise ValueError("theta_mod_2pi requires t >= 10")
    tl = _angles.as_ld(t)
    val = (tl / 2 * (_angles.log_ld(t) - _angles.LOG_2PI) - tl / 2
           + 15 * _angles.PI / 8 - 241 / (24 * tl))
    out = _angles.reduce_mod_2pi(val)
    return float(out) if np.ndim(out) == 0 else out


def rho0(t):
    """Truncated modulus rho0(t) = (2pi)^{-7/4} t^{7/4} (19 + t^2)."""
    t = np.asarray(t, dtype=float)
    if not np.all(t > 0.0):
        raise ValueError("rho0 requires t > 0")
    out = (2.0 * math.pi) ** -1.75 * t ** 1.75 * (19.0 + t * t)
    return float(out) if np.ndim(out) == 0 else out


def l1(x, t: float):
    """Correction polynomial L1(x,t): the seven-term bivariate truncation

        1 + 15x/(4t) + ix^2/(4t) + 165x^2/(32t^2) + 241ix/(24t^2)
          + 41ix^3/(48t^2) - x^4/(32t^2)

    Scalars or arrays in x.
    """
    if not t > 0.0:
        raise ValueError("l1 requires t > 0")
    x = np.asarray(x, dtype=float)
    re = (1.0 + 15.0 * x / (4.0 * t) + 165.0 * x ** 2 / (32.0 * t ** 2)
          - x ** 4 / (32.0 * t ** 2))
    im = (x ** 2 / (4.0 * t) + 241.0 * x / (24.0 * t ** 2)
          + 41.0 * x ** 3 / (48.0 * t ** 2))
    out = re + 1j * im
    if np.ndim(out) == 0:
        return complex(out)
    return out
