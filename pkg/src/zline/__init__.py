"""zline: the Riemann-Siegel Z function through a smoothing-kernel line
integral and its companion Dirichlet-type series.

The package provides three independent routes to Z(t) (classical oracle,
exact integral representation, series approximation), the staged
approximations connecting them, and zero-scanning / phase-statistics tools
built on top.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import AccuracyWarning, ConvergenceError, PhaseTrackError
from .special import (
    ZOracleConfig,
    ln_gamma,
    rs_theta,
    upper_incomplete_gamma,
    z_oracle,
    z_oracle_info,
    zeta_em,
    zeta_right,
)
from .phase import (
    ALPHA_SERIES,
    BERNOULLI_EVEN,
    LOG_RHO_SERIES,
    AsymptoticSeries,
    PhasePolar,
    alpha_asymptotic,
    h_exact,
    h_polar,
    l1,
    log_rho_asymptotic,
    rho0,
    theta,
    theta_mod_2pi,
)
from .quad import (
    QuadratureConfig,
    StripProblem,
    f_integral,
    f_integral_grid,
    f_on_line,
    f_staged,
    kernel,
    omega_kernel,
    strip_solve,
    z_from_integral,
)
from .series import (
    EulerianB,
    SeriesTolerance,
    eulerian_b,
    fourier_cosh_moment,
    g_series,
    h_r_series,
    h_r_series_info,
    h_series,
    h_series_grid,
    h_series_info,
    z_approx,
)
from .scan import (
    PhaseTrack,
    XrayGrid,
    ZeroScanReport,
    c_statistic,
    c_statistic_profile,
    continuous_arg,
    count_zeros,
    perturbation_phase_check,
    phase_count_check,
    xray_grid,
)
from .cli import OutputRecord, main

__all__ = [
    "__version__",
    "AccuracyWarning",
    "ConvergenceError",
    "PhaseTrackError",
    "ZOracleConfig",
    "ln_gamma",
    "rs_theta",
    "upper_incomplete_gamma",
    "z_oracle",
    "z_oracle_info",
    "zeta_em",
    "zeta_right",
    "ALPHA_SERIES",
    "BERNOULLI_EVEN",
    "LOG_RHO_SERIES",
    "AsymptoticSeries",
    "PhasePolar",
    "alpha_asymptotic",
    "h_exact",
    "h_polar",
    "l1",
    "log_rho_asymptotic",
    "rho0",
    "theta",
    "theta_mod_2pi",
    "QuadratureConfig",
    "StripProblem",
    "f_integral",
    "f_integral_grid",
    "f_on_line",
    "f_staged",
    "kernel",
    "omega_kernel",
    "strip_solve",
    "z_from_integral",
    "EulerianB",
    "SeriesTolerance",
    "eulerian_b",
    "fourier_cosh_moment",
    "g_series",
    "h_r_series",
    "h_r_series_info",
    "h_series",
    "h_series_grid",
    "h_series_info",
    "z_approx",
    "PhaseTrack",
    "XrayGrid",
    "ZeroScanReport",
    "c_statistic",
    "c_statistic_profile",
    "continuous_arg",
    "count_zeros",
    "perturbation_phase_check",
    "phase_count_check",
    "xray_grid",
    "OutputRecord",
    "main",
]
