"""Spacecraft attitude-dynamics simulation with a slew-rate and control-torque
constrained, finite-time-convergent attitude-tracking controller."""

from .attmath import Quaternion, qinv, qkin_rate, qmul, to_rotation
from .controller import ControlOutput, ControlParams, PrevCycle, compute_command
from .errgeo import ErrorState, full_error_state
from .plant import BodyState, DisturbanceModel, SatelliteParams, rk4_step
from .rateprofile import ProfileKind, RateProfile, build_profile, eval_omega_r
from .scenario import (
    DesiredSample,
    Scenario,
    detect_convergence,
    rest_to_rest,
    simulate,
    slew_sweep,
    target_staring_generator,
    tracking_scenario,
)
from .simcli import RunConfig, TelemetryRecord, cli_main, parse_config, read_telemetry, write_telemetry

__version__ = "0.1.0"

__all__ = [
    "BodyState",
    "ControlOutput",
    "ControlParams",
    "DesiredSample",
    "DisturbanceModel",
    "ErrorState",
    "PrevCycle",
    "ProfileKind",
    "Quaternion",
    "RateProfile",
    "RunConfig",
    "SatelliteParams",
    "Scenario",
    "TelemetryRecord",
    "build_profile",
    "cli_main",
    "compute_command",
    "detect_convergence",
    "eval_omega_r",
    "full_error_state",
    "parse_config",
    "qinv",
    "qkin_rate",
    "qmul",
    "read_telemetry",
    "rest_to_rest",
    "rk4_step",
    "simulate",
    "slew_sweep",
    "target_staring_generator",
    "to_rotation",
    "tracking_scenario",
    "write_telemetry",
]
