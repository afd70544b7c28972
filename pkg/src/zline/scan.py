"""Zero counting and phase diagnostics along the critical line.

Everything here works with *continuously tracked* arguments.  A sampled
complex signal only determines its phase up to multiples of 2 pi; we pin
the branch by insisting that consecutive samples move by less than pi/2
and refuse to guess otherwise.  On top of that sit the zero counter, the
winding-number cross-check against the counted zeros, the perturbation
argument (two signals whose difference is dominated never drift a full
turn apart), the normalized phase-decay statistic, and a sign-grid
export of the series evaluator off the real axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Tuple

import numpy as np

from . import _angles
from .errors import PhaseTrackError
from .quad import QuadratureConfig, f_integral_grid
from .series import SeriesTolerance, h_series_grid
from .special import _em_tail, _pow2_bucket, z_oracle

__all__ = [
    "PhaseTrack",
    "ZeroScanReport",
    "XrayGrid",
    "continuous_arg",
    "count_zeros",
    "phase_count_check",
    "perturbation_phase_check",
    "c_statistic",
    "c_statistic_profile",
    "xray_grid",
]

_HALF_PI = 0.5 * math.pi
_LOG_2PI = math.log(2.0 * math.pi)
# refine before a step gets anywhere near the pi/2 rejection threshold
_REFINE_TRIGGER = 0.4 * math.pi
_MAX_REFINE_ROUNDS = 6
# ten-way splits: six rounds buy a millionfold local refinement, enough
# for the near-zero passes of H (observed as close as |H| ~ 1e-7)
_REFINE_SPLIT = 10


@dataclass(frozen=True)
class PhaseTrack:
    """A continuously unwrapped argument along an increasing grid.

    Invariant: consecutive phase differences stay below pi/2 in
    magnitude, so the unwrapping is unambiguous.
    """

    grid: np.ndarray
    phase: np.ndarray
    source: str = ""

    def __post_init__(self) -> None:
        grid = np.asarray(self.grid, dtype=float)
        phase = np.asarray(self.phase, dtype=float)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "phase", phase)
        if grid.ndim != 1 or grid.shape != phase.shape:
            raise ValueError("grid and phase must be 1-d arrays of equal length")
        if grid.size < 2:
            raise ValueError("a phase track needs at least two samples")
        if np.any(np.diff(grid) <= 0.0):
            raise ValueError("grid must be strictly increasing")
        if np.any(np.abs(np.diff(phase)) >= _HALF_PI):
            raise PhaseTrackError("phase step of pi/2 or more; track is not resolved")

    @property
    def delta(self) -> float:
        """Total phase change across the track."""
        return float(self.phase[-1] - self.phase[0])


@dataclass(frozen=True)
class ZeroScanReport:
    """Outcome of a scan over [a, b]: the located zeros, and optionally
    the phase change of the integral evaluator with its verdict against
    the counting inequality |delta_phi| / pi < count + 1."""

    interval: Tuple[float, float]
    zeros: np.ndarray
    count: int
    delta_phi: Optional[float] = None
    verdict: Optional[bool] = None

    def __post_init__(self) -> None:
        zeros = np.asarray(self.zeros, dtype=float)
        object.__setattr__(self, "zeros", zeros)
        a, b = float(self.interval[0]), float(self.interval[1])
        object.__setattr__(self, "interval", (a, b))
        if not a < b:
            raise ValueError("interval must satisfy a < b")
        if self.count != zeros.size:
            raise ValueError("count must equal the number of zeros")
        if zeros.size:
            if np.any(np.diff(zeros) < 0.0):
                raise ValueError("zeros must be sorted ascending")
            if zeros[0] < a or zeros[-1] > b:
                raise ValueError("zero outside the scanned interval")
        if (self.delta_phi is None) != (self.verdict is None):
            raise ValueError("delta_phi and verdict must be set together")
        if self.verdict is not None:
            expected = bool(abs(self.delta_phi) / math.pi < self.count + 1)
            if bool(self.verdict) != expected:
                raise ValueError("verdict inconsistent with delta_phi and count")


def _track_values(ts: np.ndarray, vals: np.ndarray, source: str = "") -> PhaseTrack:
    ts = np.asarray(ts, dtype=float)
    vals = np.asarray(vals, dtype=complex)
    if ts.size != vals.size:
        raise ValueError("sample times and values must align")
    if ts.size < 2:
        raise ValueError("need at least two samples to track a phase")
    if np.any(np.diff(ts) <= 0.0):
        raise ValueError("samples must be strictly increasing in t")
    mag = np.abs(vals)
    if np.any(mag == 0.0):
        i = int(np.argmin(mag))
        raise PhaseTrackError(f"zero sample at t={ts[i]:g}; argument undefined")
    steps = np.angle(vals[1:] / vals[:-1])
    bad = np.abs(steps) >= _HALF_PI
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PhaseTrackError(
            f"phase step {steps[i]:+.3f} rad between t={ts[i]:g} and "
            f"t={ts[i + 1]:g}; grid too coarse to unwrap"
        )
    phase = np.empty(ts.size)
    phase[0] = math.atan2(vals[0].imag, vals[0].real)
    phase[1:] = phase[0] + _cumsum_stable(steps)
    return PhaseTrack(ts, phase, source)


def _cumsum_stable(steps: np.ndarray) -> np.ndarray:
    """Cumulative sum whose late entries do not inherit the rounding of
    a long naive prefix; block offsets are compensated with fsum."""
    out = np.empty(steps.size)
    block = 4096
    totals: list = []
    for start in range(0, steps.size, block):
        chunk = steps[start:start + block]
        out[start:start + chunk.size] = math.fsum(totals) + np.cumsum(chunk)
        totals.append(math.fsum(chunk))
    return out


def continuous_arg(samples: Iterable[Tuple[float, complex]]) -> PhaseTrack:
    """Unwrap the argument of (t, value) samples taken along a curve.

    The first sample anchors the branch at its principal argument; each
    later sample takes the nearest branch.  Raises PhaseTrackError on a
    zero sample or when a step is too large to unwrap safely.
    """
    ts: list = []
    vals: list = []
    for item in samples:
        t, v = item
        ts.append(float(t))
        vals.append(complex(v))
    if not ts:
        raise ValueError("no samples supplied")
    return _track_values(np.asarray(ts), np.asarray(vals), source="samples")


def _bisect(f: Callable[[float], float], lo: float, hi: float,
            neg_left: bool, width: float) -> float:
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = float(f(mid))
        if fm == 0.0:
            return mid
        if (fm < 0.0) == neg_left:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def count_zeros(evaluator: Callable[[float], float], a: float, b: float,
                step: float = 0.05, refine_width: float = 1e-9) -> ZeroScanReport:
    """Locate sign changes of a real-valued function on [a, b].

    The scan samples at the given step and refines each bracket by
    bisection until it is narrower than refine_width.  Zeros of even
    order (no sign change) are invisible to this scan, so the count is a
    lower bound in general.
    """
    a = float(a)
    b = float(b)
    step = float(step)
    refine_width = float(refine_width)
    if not a < b:
        raise ValueError("need a < b")
    if not 0.0 < step <= 0.25:
        raise ValueError("step must lie in (0, 0.25]")
    if refine_width <= 0.0:
        raise ValueError("refine_width must be positive")
    grid = np.append(np.arange(a, b, step), b)
    vals = np.array([float(evaluator(float(t))) for t in grid])
    zeros: list = []
    for i in range(grid.size - 1):
        flo, fhi = vals[i], vals[i + 1]
        if flo == 0.0:
            lo = float(grid[i])
            if not zeros or lo - zeros[-1] > refine_width:
                zeros.append(lo)
            continue
        if fhi == 0.0:
            continue  # credited when it becomes the left endpoint
        if (flo < 0.0) != (fhi < 0.0):
            zeros.append(_bisect(evaluator, float(grid[i]), float(grid[i + 1]),
                                 flo < 0.0, refine_width))
    if vals[-1] == 0.0 and (not zeros or b - zeros[-1] > refine_width):
        zeros.append(b)
    return ZeroScanReport((a, b), np.asarray(zeros), len(zeros))


def phase_count_check(a: float, b: float, step: float = 0.05,
                      quad: Optional[QuadratureConfig] = None) -> ZeroScanReport:
    """Cross-check counted zeros against the winding of the integral.

    Scans the oracle for sign changes on [a, b], tracks the argument of
    the analytic integral evaluator on the same grid, and records the
    verdict of |delta_phi| / pi < count + 1.  A grid too coarse for the
    phase track raises PhaseTrackError.
    """
    a = float(a)
    b = float(b)
    if not (a >= 10.0 and a < b):
        raise ValueError("need 10 <= a < b")
    report = count_zeros(z_oracle, a, b, step)
    grid = np.append(np.arange(a, b, step), b)
    vals = f_integral_grid(grid, 4.0, quad)
    track = _track_values(grid, vals, source="F")
    delta = track.delta
    verdict = bool(abs(delta) / math.pi < report.count + 1)
    return ZeroScanReport((a, b), report.zeros, report.count, delta, verdict)


def perturbation_phase_check(f_track: PhaseTrack, g_track: PhaseTrack,
                             witness: Sequence[bool]) -> bool:
    """Verify that two tracked phases never separate by a full turn.

    The witness must certify, pointwise, that the difference of the two
    underlying signals is strictly dominated (so their arguments can
    never be antipodal).  Under that hypothesis the phase difference
    stays inside one open pi-neighbourhood of a single multiple of
    2 pi, which in particular bounds |delta_f - delta_g| below 2 pi.
    A false witness anywhere makes the check vacuous: ValueError.
    """
    if not np.array_equal(f_track.grid, g_track.grid):
        raise ValueError("phase tracks must share one grid")
    dom = np.asarray(witness, dtype=bool)
    if dom.shape != f_track.grid.shape:
        raise ValueError("witness length must match the grid")
    if not np.all(dom):
        i = int(np.argmin(dom))
        raise ValueError(
            f"dominance witness fails at t={f_track.grid[i]:g}; check is vacuous")
    d = f_track.phase - g_track.phase
    k = round(float(np.median(d)) / (2.0 * math.pi))
    pinned = bool(np.all(np.abs(d - 2.0 * math.pi * k) < math.pi))
    return pinned and abs(float(d[-1] - d[0])) < 2.0 * math.pi


def _arg_h_track(t_end: float, step: float,
                 tol: Optional[SeriesTolerance],
                 anchors: Optional[np.ndarray] = None) -> PhaseTrack:
    """Track arg H from t = 1 up to t_end, refining locally (at most
    _MAX_REFINE_ROUNDS rounds of midpoint insertion) where the sampled
    phase moves too fast."""
    grid = np.append(np.arange(1.0, t_end, step), t_end)
    if anchors is not None:
        grid = np.unique(np.concatenate([grid, anchors]))
    vals = h_series_grid(grid, tol)
    for _ in range(_MAX_REFINE_ROUNDS):
        steps = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(steps) >= _REFINE_TRIGGER
        if not np.any(bad):
            break
        lo = grid[:-1][bad]
        hi = grid[1:][bad]
        frac = np.arange(1, _REFINE_SPLIT) / _REFINE_SPLIT
        news = (lo[:, None] + (hi - lo)[:, None] * frac[None, :]).ravel()
        nvals = h_series_grid(news, tol)
        grid = np.concatenate([grid, news])
        vals = np.concatenate([vals, nvals])
        order = np.argsort(grid, kind="stable")
        grid = grid[order]
        vals = vals[order]
    steps = np.angle(vals[1:] / vals[:-1])
    bad = np.abs(steps) >= _HALF_PI
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PhaseTrackError(
            f"arg H under-resolved near t={grid[i]:g} after "
            f"{_MAX_REFINE_ROUNDS} refinement rounds"
        )
    return _track_values(grid, vals, source="H")


def _phase_scale(t: np.ndarray) -> np.ndarray:
    return 0.5 * t * (np.log(t) - _LOG_2PI) - 0.5 * t


def c_statistic_profile(ts: Sequence[float], step: float = 0.05,
                        tol: Optional[SeriesTolerance] = None) -> np.ndarray:
    """c at several heights from a single shared phase track."""
    ts_arr = np.unique(np.asarray(ts, dtype=float))
    if ts_arr.size == 0:
        raise ValueError("no evaluation points")
    if np.any(ts_arr < 100.0):
        raise ValueError("the statistic needs t >= 100")
    if not 0.0 < step <= 0.25:
        raise ValueError("step must lie in (0, 0.25]")
    track = _arg_h_track(float(ts_arr[-1]), step, tol, anchors=ts_arr)
    idx = np.searchsorted(track.grid, ts_arr)
    if not np.allclose(track.grid[idx], ts_arr, rtol=0.0, atol=0.0):
        raise RuntimeError("evaluation points lost during refinement")
    return -track.phase[idx] / _phase_scale(ts_arr)


def c_statistic(t: float, step: float = 0.05,
                tol: Optional[SeriesTolerance] = None) -> float:
    """Normalized decay rate of arg H, tracked continuously from t = 1.

    Returns -arg H(t) / (t/2 log(t / 2 pi) - t/2); the argument is the
    continuation of the principal value at t = 1, where the first term
    of the series dominates.
    """
    t = float(t)
    if t < 100.0:
        raise ValueError("the statistic needs t >= 100")
    return float(c_statistic_profile([t], step, tol)[0])


def _sech_c(w: np.ndarray) -> np.ndarray:
    # reflect to Re w <= 0 so the exponential never overflows
    aw = np.where(w.real > 0.0, -w, w)
    e = np.exp(aw)
    return 2.0 * e / (1.0 + e * e)


def _h_complex(z) -> np.ndarray:
    """The series evaluator continued off the real axis.

    Terms up to a cutoff past the stationary index are summed directly;
    beyond it the hyperbolic factor is within 1e-18 of its leading
    exponential, which turns the remainder into a Dirichlet tail with
    exponent 15/2 + iz, summed in closed form.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(z.real <= 0.0):
        raise ValueError("evaluation needs Re z > 0")
    if np.any(z.imag <= -3.0) or np.any(z.imag > 4.0):
        raise ValueError("imaginary part must lie inside (-3, 4]")
    re_max = float(z.real.max())
    n0 = _pow2_bucket(max(2048, int(0.4 * re_max) + 1), 2048)
    n = np.arange(1, n0 + 1)
    log_n = _angles.log_ld(n)
    log_n_d = np.asarray(log_n, dtype=float)
    out = np.empty(z.shape, dtype=complex)
    block = max(1, (1 << 22) // n0)
    for start in range(0, z.size, block):
        zb = z[start:start + block]
        w = 1.75 * (np.log(zb)[:, None] - _LOG_2PI - 2.0 * log_n_d[None, :])
        amp = np.exp((zb.imag[:, None] - 4.0) * log_n_d[None, :])
        if re_max * math.log(n0) < 1e8:
            ph = np.outer(-zb.real, log_n_d)
        else:
            ph = _angles.reduce_mod_2pi(
                -_angles.as_ld(zb.real)[:, None] * log_n[None, :])
        terms = amp * (np.cos(ph) + 1j * np.sin(ph)) * _sech_c(w)
        pref = 2.0 * np.exp(1.75 * (np.log(zb) - _LOG_2PI))
        out[start:start + zb.size] = (terms.sum(axis=1)
                                      + pref * _em_tail(7.5 + 1j * zb, n0))
    return out


@dataclass(frozen=True)
class XrayGrid:
    """Sign data of the series evaluator over a rectangle in the plane.

    sign_re[i, j] and sign_im[i, j] hold the signs of the real and
    imaginary parts at re_values[i] + 1j * im_values[j].
    """

    re_values: np.ndarray
    im_values: np.ndarray
    sign_re: np.ndarray
    sign_im: np.ndarray

    def rows(self):
        """Deterministic row order for export: re-major, im-minor."""
        for i, re in enumerate(self.re_values):
            for j, im in enumerate(self.im_values):
                yield float(re), float(im), int(self.sign_re[i, j]), int(self.sign_im[i, j])


def xray_grid(re0: float, re1: float, im0: float, im1: float,
              n_re: int, n_im: int) -> XrayGrid:
    """Evaluate sign(Re H) and sign(Im H) on an n_re x n_im rectangle.

    The imaginary range must stay inside (-3, 4), where the continued
    series retains enough decay to converge absolutely.
    """
    re0 = float(re0)
    re1 = float(re1)
    im0 = float(im0)
    im1 = float(im1)
    if not re0 < re1:
        raise ValueError("need re0 < re1")
    if not im0 < im1:
        raise ValueError("need im0 < im1")
    if re0 <= 0.0:
        raise ValueError("real range must be positive")
    if not (im0 > -3.0 and im1 <= 4.0):
        raise ValueError("imaginary range must lie inside (-3, 4]")
    if n_re < 2 or n_im < 2:
        raise ValueError("need at least a 2 x 2 grid")
    res = np.linspace(re0, re1, int(n_re))
    ims = np.linspace(im0, im1, int(n_im))
    zs = res[:, None] + 1j * ims[None, :]
    h = _h_complex(zs.ravel()).reshape(int(n_re), int(n_im))
    return XrayGrid(res, ims,
                    np.sign(h.real).astype(np.int8),
                    np.sign(h.imag).astype(np.int8))
