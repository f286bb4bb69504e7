"""Lookahead line-of-sight guidance along straight path segments."""

from __future__ import annotations

import math

from ..world import Point2, wrap_angle


def segment_frame(pos: Point2, a: Point2, b: Point2) -> tuple[float, float, float]:
    """Return (course, along-track, cross-track) of ``pos`` relative to segment ab.

    Cross-track is positive when the position lies to the left of the segment.
    """
    dx, dy = b.x - a.x, b.y - a.y
    seg = math.hypot(dx, dy)
    if seg == 0.0:
        raise ValueError("degenerate segment")
    course = math.atan2(dy, dx)
    px, py = pos.x - a.x, pos.y - a.y
    along = (px * dx + py * dy) / seg
    cross = (dx * py - dy * px) / seg
    return course, along, cross


def cross_track_error(pos: Point2, a: Point2, b: Point2) -> float:
    return segment_frame(pos, a, b)[2]


def los_heading(pose: tuple[float, float, float], wp_prev: Point2, wp_next: Point2, lookahead: float) -> float:
    if lookahead <= 0:
        raise ValueError("lookahead must be > 0")
    course, _, e = segment_frame(Point2(pose[0], pose[1]), wp_prev, wp_next)
    return wrap_angle(course + math.atan2(-e, lookahead))
