# -*- coding: utf-8 -*-
from scene2prompt.utils import Aabb3, Point3, as_point, verify_box


def bbox_center(box: Aabb3) -> Point3:
    """Geometry: Box Center"""
    box = verify_box(box)
    return Point3(
        0.5 * (box.min.x + box.max.x),
        0.5 * (box.min.y + box.max.y),
        0.5 * (box.min.z + box.max.z),
    )


def box_from_center(center, size) -> Aabb3:
    """Aabb3 of the given size (dx, dy, dz) centered on center."""
    c = as_point(center)
    dx, dy, dz = (0.5 * float(s) for s in size)
    return Aabb3(Point3(c.x - dx, c.y - dy, c.z - dz), Point3(c.x + dx, c.y + dy, c.z + dz))


bbox_center.__doc__ = \
"""Box Center

The componentwise midpoint of an axis-aligned box. The single coordinate
triple written for each object of a scene description is its box center.

Calculation:
    C = (min + max) / 2

Args:
    box (Aabb3): The box

Returns:
    Point3: The center
"""
