# -*- coding: utf-8 -*-
from math import radians, tan
from typing import Optional, Tuple

from numpy import array as npArray
from numpy import float64, isfinite

from scene2prompt import RENDER
from scene2prompt.utils import as_point

from ._camera import CameraSpec


def project_points(camera: CameraSpec, points, width: int, height: int):
    """Vectorized projection of (n, 3) points.

    Returns px, py, depth and a mask of points in front of the camera. Points
    outside the image are not masked; callers clip.
    """
    points = npArray(points, dtype=float64).reshape(-1, 3)
    right, up, forward = camera.basis()
    rel = points - npArray(camera.position.as_tuple())
    xc, yc, depth = rel @ right, rel @ up, rel @ forward

    if camera.orthographic:
        scale = min(width, height) / camera.ortho_extent
        px = 0.5 * width + xc * scale
        py = 0.5 * height - yc * scale
        front = depth > 0.0
    else:
        focal = 0.5 * height / tan(radians(camera.vfov) / 2.0)
        front = depth > RENDER["NEAR"]
        safe = depth.copy()
        safe[~front] = 1.0
        px = 0.5 * width + focal * xc / safe
        py = 0.5 * height - focal * yc / safe

    return px, py, depth, front & isfinite(px) & isfinite(py)


def project_point(camera: CameraSpec, p, width: int, height: int) -> Optional[Tuple[float, float, float]]:
    """Render: Point Projection"""
    px, py, depth, front = project_points(camera, [as_point(p).as_tuple()], width, height)
    if not front[0]: return None
    if not (0.0 <= px[0] < width and 0.0 <= py[0] < height): return None
    return float(px[0]), float(py[0]), float(depth[0])


project_point.__doc__ = \
"""Point Projection

Maps a world point to continuous pixel coordinates. The camera frame is
right = forward x up, up' = right x forward. Pixel (0, 0) is the top-left
corner; pixel i spans [i, i + 1).

Calculation:
    d = p - position
    xc, yc, depth = d . right, d . up', d . forward
    orthographic:
        s = min(W, H) / ortho_extent
        px = W / 2 + xc * s, py = H / 2 - yc * s
    perspective:
        f = (H / 2) / tan(vfov / 2)
        px = W / 2 + f * xc / depth, py = H / 2 - f * yc / depth

Args:
    camera (CameraSpec): The camera
    p (Point3 | sequence): The world point
    width (int): Image width
    height (int): Image height

Returns:
    tuple | None: (px, py, depth), or None when the point is behind the
        camera or outside the image
"""
