# -*- coding: utf-8 -*-
from math import atan2, cos, hypot, sin, tau

from scene2prompt.utils import GeometryError


def yaw_from_quaternion(q, tolerance: float = 1e-6) -> float:
    """Geometry: Yaw from a unit quaternion (w, x, y, z)"""
    # Validate Arguments
    try:
        w, x, y, z = (float(v) for v in q)
    except (TypeError, ValueError):
        raise GeometryError(f"[X] Expected a quaternion (w, x, y, z), got {q!r}")

    norm = (w * w + x * x + y * y + z * z) ** 0.5
    if abs(norm - 1.0) > tolerance:
        raise GeometryError(f"[X] Quaternion is not unit length: |q| = {norm}")

    # Calculate Result: first column of the rotation matrix is R(+x)
    fx = 1.0 - 2.0 * (y * y + z * z)
    fy = 2.0 * (x * y + w * z)
    if hypot(fx, fy) <= tolerance:
        raise GeometryError("[X] Rotated +x axis has no xy-plane projection; yaw undefined")

    yaw = atan2(fy, fx) % tau
    return 0.0 if yaw >= tau else yaw


def quaternion_from_yaw(yaw: float) -> tuple:
    """Unit quaternion (w, x, y, z) rotating by yaw radians about +z."""
    half = 0.5 * float(yaw)
    return (cos(half), 0.0, 0.0, sin(half))


yaw_from_quaternion.__doc__ = \
"""Yaw from Quaternion

Situated question answering datasets ship the agent rotation as a quaternion.
The agent's facing direction is the image of +x under that rotation, and its
yaw is the counterclockwise angle of that direction projected into the
xy-plane.

Calculation:
    Fx = 1 - 2 (y^2 + z^2)
    Fy = 2 (x y + w z)
    YAW = atan2(Fy, Fx) mod 2pi

Args:
    q (sequence): Unit quaternion (w, x, y, z)
    tolerance (float): Allowed deviation of |q| from 1. Default: 1e-6

Returns:
    float: yaw in [0, 2pi)

Raises:
    GeometryError: non-unit quaternion, or rotated +x is vertical
"""
