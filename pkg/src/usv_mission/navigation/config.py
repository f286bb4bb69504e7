from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class NavConfig:
    """Tuning for path planning, guidance, control and progress monitoring."""

    resolution: float = 1.0
    clearance: float = 3.0
    lookahead: float = 3.0
    cruise_speed: float = 1.5
    # heading PID: output is a yaw-rate command (rad/s)
    heading_kp: float = 1.2
    heading_ki: float = 0.02
    heading_kd: float = 0.1
    heading_integral_limit: float = 2.0
    # speed PID: output is a surge force correction (N) on top of drag feedforward
    speed_kp: float = 150.0
    speed_ki: float = 20.0
    speed_kd: float = 0.0
    speed_integral_limit: float = 5.0
    yaw_rate_gain: float = 300.0  # N*m per rad/s of yaw-rate error
    capture_radius: float = 2.0
    deviation_limit: float = 10.0
    deviation_window: float = 5.0
    timeout_factor: float = 3.0
    min_budget: float = 30.0

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"NavConfig.{name} must be finite and >= 0, got {value}")
        for name in ("resolution", "lookahead", "cruise_speed", "capture_radius",
                     "deviation_limit", "timeout_factor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"NavConfig.{name} must be > 0")
