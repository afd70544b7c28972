"""Shared exception and warning types."""
from __future__ import annotations


class ConvergenceError(RuntimeError):
    """An iteration failed to converge, or a window/term cap was exceeded."""


class PhaseTrackError(RuntimeError):
    """Continuous-branch tracking rejected a step (under-resolved grid,
    zero sample, or a phase jump too large to assign a branch)."""


class AccuracyWarning(UserWarning):
    """Estimated error of a returned value exceeds its advertised target."""
