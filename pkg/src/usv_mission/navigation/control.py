"""Heading/speed PID loops, twist computation and differential thrust allocation."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..dynamics import PodCommand, VesselParams, VesselState, rpm_from_thrust
from ..world import Point2, wrap_angle
from .config import NavConfig
from .guidance import los_heading
from .pathing import Path


@dataclass(frozen=True)
class PidState:
    kp: float
    ki: float
    kd: float
    integral: float = 0.0
    prev_error: float | None = None
    output_limit: float = math.inf
    integral_limit: float = math.inf

    def __post_init__(self):
        if min(self.kp, self.ki, self.kd) < 0:
            raise ValueError("PID gains must be >= 0")
        if abs(self.integral) > self.integral_limit:
            raise ValueError("integral exceeds its limit")

    def reset(self) -> PidState:
        return replace(self, integral=0.0, prev_error=None)


def pid_step(pid: PidState, error: float, dt: float) -> tuple[float, PidState]:
    """One PID update with integral anti-windup and output saturation.

    The derivative term is zero on the first call after a reset (no kick).
    """
    if dt <= 0:
        raise ValueError("dt must be > 0")
    lim = pid.integral_limit
    integral = max(-lim, min(lim, pid.integral + error * dt))
    deriv = 0.0 if pid.prev_error is None else (error - pid.prev_error) / dt
    out = pid.kp * error + pid.ki * integral + pid.kd * deriv
    out = max(-pid.output_limit, min(pid.output_limit, out))
    return out, replace(pid, integral=integral, prev_error=error)


@dataclass(frozen=True)
class Twist:
    surge_cmd: float = 0.0
    yaw_rate_cmd: float = 0.0


def heading_pid(config: NavConfig, params: VesselParams) -> PidState:
    return PidState(
        config.heading_kp, config.heading_ki, config.heading_kd,
        output_limit=params.r_max, integral_limit=config.heading_integral_limit,
    )


def speed_pid(config: NavConfig, params: VesselParams) -> PidState:
    return PidState(
        config.speed_kp, config.speed_ki, config.speed_kd,
        output_limit=2.0 * params.max_thrust, integral_limit=config.speed_integral_limit,
    )


def heading_twist(
    state: VesselState,
    desired_heading: float,
    cruise: float,
    pid: PidState,
    params: VesselParams,
    dt: float,
) -> tuple[Twist, PidState]:
    err = wrap_angle(desired_heading - state.psi)
    r_cmd, pid = pid_step(pid, err, dt)
    surge = cruise * max(0.0, math.cos(err))
    surge = max(-params.u_max, min(params.u_max, surge))
    r_cmd = max(-params.r_max, min(params.r_max, r_cmd))
    return Twist(surge, r_cmd), pid


def compute_twist(
    state: VesselState,
    path: Path,
    progress: int,
    config: NavConfig,
    pid: PidState,
    params: VesselParams,
    dt: float,
) -> tuple[Twist, PidState]:
    """LOS heading on segment ``progress`` -> ``progress + 1``, tracked by the heading PID."""
    wps = path.waypoints
    if not 0 <= progress < len(wps) - 1:
        raise IndexError(f"progress index {progress} invalid for {len(wps)} waypoints")
    psi_d = los_heading((state.x, state.y, state.psi), wps[progress], wps[progress + 1], config.lookahead)
    return heading_twist(state, psi_d, config.cruise_speed, pid, params, dt)


def allocate_thrust(
    tw: Twist,
    state: VesselState,
    params: VesselParams,
    pid: PidState,
    dt: float,
    yaw_rate_gain: float,
) -> tuple[PodCommand, PidState]:
    """Map a twist to pod RPMs with both azimuths held at zero.

    Common-mode thrust is drag feedforward plus the speed PID; differential
    thrust is yaw drag feedforward plus a proportional yaw-rate term. When the
    pods saturate, the differential part is kept and common mode gives way.
    """
    correction, pid = pid_step(pid, tw.surge_cmd - state.u, dt)
    surge_force = params.drag_surge * tw.surge_cmd + correction
    yaw_moment = params.drag_yaw * tw.yaw_rate_cmd + yaw_rate_gain * (tw.yaw_rate_cmd - state.r)

    t_max = params.max_thrust
    diff = yaw_moment / (2.0 * params.pod_half_spacing)
    diff = max(-t_max, min(t_max, diff))
    room = t_max - abs(diff)
    common = max(-room, min(room, surge_force / 2.0))
    # starboard pod sits at -y, so it turns the hull counter-clockwise
    port_t, stbd_t = common - diff, common + diff
    k = params.thrust_coeff
    lim = params.rpm_max
    cmd = PodCommand(
        port_rpm=max(-lim, min(lim, rpm_from_thrust(port_t, k))),
        starboard_rpm=max(-lim, min(lim, rpm_from_thrust(stbd_t, k))),
    )
    return cmd, pid


class Autopilot:
    """Stateful bundle of the heading and speed loops used by the closed-loop simulator."""

    def __init__(self, config: NavConfig, params: VesselParams):
        self.config = config
        self.params = params
        self.heading = heading_pid(config, params)
        self.speed = speed_pid(config, params)

    def reset(self) -> None:
        self.heading = self.heading.reset()
        self.speed = self.speed.reset()

    def follow(self, state: VesselState, path: Path, progress: int, dt: float) -> PodCommand:
        tw, self.heading = compute_twist(state, path, progress, self.config, self.heading, self.params, dt)
        return self._allocate(tw, state, dt)

    def hold_heading(self, state: VesselState, heading: float, dt: float, cruise: float = 0.0) -> PodCommand:
        tw, self.heading = heading_twist(state, heading, cruise, self.heading, self.params, dt)
        return self._allocate(tw, state, dt)

    def steer_to(self, state: VesselState, target: Point2, dt: float) -> PodCommand:
        heading = math.atan2(target.y - state.y, target.x - state.x)
        return self.hold_heading(state, heading, dt, self.config.cruise_speed)

    def _allocate(self, tw: Twist, state: VesselState, dt: float) -> PodCommand:
        cmd, self.speed = allocate_thrust(tw, state, self.params, self.speed, dt, self.config.yaw_rate_gain)
        return cmd
