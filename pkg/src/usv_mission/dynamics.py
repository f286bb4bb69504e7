"""3-DOF surface vessel with two pods, quadratic thrust and constant disturbance.

Body frame: x forward, y to port (left). Pods sit at (-pod_offset, +pod_half_spacing)
(port) and (-pod_offset, -pod_half_spacing) (starboard). Positive yaw rate turns
the hull counter-clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .world import Disturbance, wrap_angle


@dataclass(frozen=True)
class VesselParams:
    mass: float = 180.0
    yaw_inertia: float = 170.0
    drag_surge: float = 100.0
    drag_sway: float = 300.0
    drag_yaw: float = 120.0
    thrust_coeff: float = 1e-4  # N / rpm^2
    pod_offset: float = 1.2
    pod_half_spacing: float = 0.5
    rpm_max: float = 1000.0
    azimuth_max: float = math.pi / 2
    u_max: float = 2.0
    r_max: float = 0.6
    length: float = 3.0
    beam: float = 1.5

    def __post_init__(self):
        for name in (
            "mass", "yaw_inertia", "drag_surge", "drag_sway", "drag_yaw", "thrust_coeff",
            "pod_half_spacing", "rpm_max", "azimuth_max", "u_max", "r_max", "length", "beam",
        ):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"VesselParams.{name} must be finite and > 0, got {value}")

    @property
    def max_thrust(self) -> float:
        return thrust_from_rpm(self.rpm_max, self.thrust_coeff)


@dataclass(frozen=True)
class VesselState:
    x: float = 0.0
    y: float = 0.0
    psi: float = 0.0
    u: float = 0.0
    v: float = 0.0
    r: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        vals = (self.x, self.y, self.psi, self.u, self.v, self.r, self.t)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError(f"non-finite vessel state {vals}")

    def as_row(self) -> tuple[float, ...]:
        return (self.t, self.x, self.y, self.psi, self.u, self.v, self.r)


@dataclass(frozen=True)
class PodCommand:
    port_rpm: float = 0.0
    starboard_rpm: float = 0.0
    port_azimuth: float = 0.0
    starboard_azimuth: float = 0.0


def thrust_from_rpm(rpm: float, k_t: float) -> float:
    """Signed quadratic propeller law T = k_T * rpm * |rpm|."""
    return k_t * rpm * abs(rpm)


def rpm_from_thrust(thrust: float, k_t: float) -> float:
    return math.copysign(math.sqrt(abs(thrust) / k_t), thrust) if thrust else 0.0


def _clamp(x: float, lim: float) -> float:
    return max(-lim, min(lim, x))


def step(
    state: VesselState,
    cmd: PodCommand,
    dist: Disturbance,
    params: VesselParams,
    dt: float,
) -> VesselState:
    """Advance one semi-implicit Euler step of length ``dt``.

    Out-of-range commands are clamped to the pod limits; velocities are clamped
    to ``u_max``/``r_max`` after integration.
    """
    if not 0.0 < dt <= 0.5:
        raise ValueError(f"dt must lie in (0, 0.5], got {dt}")
    p = params
    pods = (
        (cmd.port_rpm, cmd.port_azimuth, p.pod_half_spacing),
        (cmd.starboard_rpm, cmd.starboard_azimuth, -p.pod_half_spacing),
    )
    fx = fy = n = 0.0
    for rpm, az, ypos in pods:
        t = thrust_from_rpm(_clamp(rpm, p.rpm_max), p.thrust_coeff)
        az = _clamp(az, p.azimuth_max)
        tx, ty = t * math.cos(az), t * math.sin(az)
        fx += tx
        fy += ty
        n += -p.pod_offset * ty - ypos * tx

    c, s = math.cos(state.psi), math.sin(state.psi)
    wx, wy = dist.wind_force
    fx += c * wx + s * wy
    fy += -s * wx + c * wy

    u = state.u + dt * (fx - p.drag_surge * state.u) / p.mass
    v = state.v + dt * (fy - p.drag_sway * state.v) / p.mass
    r = state.r + dt * (n - p.drag_yaw * state.r) / p.yaw_inertia
    u = _clamp(u, p.u_max)
    r = _clamp(r, p.r_max)

    psi = state.psi + dt * r
    c, s = math.cos(psi), math.sin(psi)
    cx, cy = dist.current
    x = state.x + dt * (c * u - s * v + cx)
    y = state.y + dt * (s * u + c * v + cy)
    return VesselState(x=x, y=y, psi=wrap_angle(psi), u=u, v=v, r=r, t=state.t + dt)


def steady_surge_speed(total_thrust: float, params: VesselParams) -> float:
    """Drag-balance surge speed for a constant total forward thrust."""
    return total_thrust / params.drag_surge

