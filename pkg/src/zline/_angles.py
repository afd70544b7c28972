"""Extended-precision phase arithmetic for oscillatory sums.

The sums evaluated in this package involve phases such as t*log(n) with t up
to 1e8, where the phase itself reaches ~2e9 rad.  Reducing such an argument
mod 2pi in plain double precision costs ~1e-7 rad, which is visible in the
final Z values.  All large-phase arithmetic therefore runs in
numpy.longdouble (80-bit extended on x86-64, 64-bit mantissa), and only the
reduced phase is converted back to double.  On platforms where longdouble is
plain double the code still runs, with correspondingly larger phase error.
"""
from __future__ import annotations

import numpy as np

# 2*pi and pi to more digits than longdouble can hold; strtold rounds once.
TWO_PI = np.longdouble("6.283185307179586476925286766559005768394")
PI = np.longdouble("3.141592653589793238462643383279502884197")
LOG_2PI = np.longdouble("1.837877066409345483560659472811235279723")

#: number of mantissa bits actually available (63 on x86-64 Linux)
MANT_BITS = np.finfo(np.longdouble).nmant


def as_ld(x):
    """Convert to longdouble without a round trip through double literals."""
    return np.asarray(x, dtype=np.longdouble)


def log_ld(x):
    """Natural log evaluated in longdouble."""
    return np.log(as_ld(x))


def reduce_mod_2pi(phi) -> np.ndarray:
    """Reduce longdouble phase(s) mod 2pi and return float64 in (-2pi, 2pi).

    fmod is exactly rounded, so the only systematic error is the longdouble
    rounding of the 2pi constant itself: ~1e-11 rad after ~1e8 turns.
    """
    r = np.fmod(as_ld(phi), TWO_PI)
    return np.asarray(r, dtype=np.float64)


def cis_from_ld(phi) -> np.ndarray:
    """exp(i*phi) for longdouble phase(s), computed after reduction."""
    p = reduce_mod_2pi(phi)
    return np.cos(p) + 1j * np.sin(p)
