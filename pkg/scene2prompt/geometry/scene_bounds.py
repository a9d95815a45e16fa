# -*- coding: utf-8 -*-
from numpy import asarray, float64

from scene2prompt.utils import Aabb3, GeometryError, Point3, verify_finite


def scene_bounds(points) -> Aabb3:
    """Tight Aabb3 around an (n, 3) array of points."""
    points = asarray(points, dtype=float64).reshape(-1, 3)
    if points.shape[0] == 0:
        raise GeometryError("[X] scene_bounds requires at least one point")
    verify_finite(points, "points")
    return Aabb3(Point3.of(points.min(axis=0)), Point3.of(points.max(axis=0)))
