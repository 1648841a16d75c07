"""Python access to the quadrotor simulation core."""

from ._core import (
    TRACE_COLUMNS,
    BandError,
    Config,
    ConfigError,
    DomainError,
    QuadrotorParams,
    QuadsimError,
    TiltError,
    euler_rate_matrix,
    mix,
    noise_samples,
    overshoot,
    psd_slope,
    rise_time,
    rotation_matrix,
    settling_time,
    simulate,
    state_derivative,
    sweep_summary,
    unmix,
)

__all__ = [
    "TRACE_COLUMNS",
    "BandError",
    "Config",
    "ConfigError",
    "DomainError",
    "QuadrotorParams",
    "QuadsimError",
    "TiltError",
    "euler_rate_matrix",
    "mix",
    "noise_samples",
    "overshoot",
    "psd_slope",
    "rise_time",
    "rotation_matrix",
    "settling_time",
    "simulate",
    "state_derivative",
    "sweep_summary",
    "unmix",
]
