# -*- coding: utf-8 -*-
from math import cos, radians, sin

from scene2prompt import CARDINALS, RENDER, VIEW_IDS
from scene2prompt.geometry import bbox_center
from scene2prompt.utils import Aabb3, Point3, RenderError, verify_box

from ._camera import CameraSpec


def plan_cameras(scene_aabb: Aabb3, **kwargs) -> list:
    """Render: Camera Planning"""
    # Validate Arguments
    box = verify_box(scene_aabb)
    dx, dy, _ = box.size
    if dx <= 0.0 or dy <= 0.0:
        raise RenderError(f"[X] Scene footprint is degenerate ({dx} x {dy}); cameras need a positive area")

    margin = kwargs.pop("margin", RENDER["BEV_MARGIN"])
    distance = kwargs.pop("distance", RENDER["OBLIQUE_DISTANCE"])
    elevation = radians(kwargs.pop("elevation", RENDER["OBLIQUE_ELEVATION"]))
    vfov = kwargs.pop("vfov", RENDER["OBLIQUE_VFOV"])

    # Calculate Result
    center, diag = bbox_center(box), box.diagonal
    cameras = [CameraSpec(
        kind="orthographic_topdown",
        position=Point3(center.x, center.y, box.max.z + diag),
        look_at=center,
        up=(0.0, 1.0, 0.0),
        ortho_extent=max(dx, dy) * margin,
        view_id="bev",
    )]

    reach = distance * diag
    for view_id in VIEW_IDS[1:]:
        cx, cy = CARDINALS[view_id]
        offset = Point3(cx * reach * cos(elevation), cy * reach * cos(elevation), reach * sin(elevation))
        cameras.append(CameraSpec(
            kind="perspective_oblique",
            position=center + offset,
            look_at=center,
            up=(0.0, 0.0, 1.0),
            vfov=vfov,
            view_id=view_id,
        ))

    return cameras


plan_cameras.__doc__ = \
"""Camera Planning

Places one bird's-eye camera directly above the scene looking down and four
oblique cameras offset along the front, left, right and back cardinal
directions, each angled toward the scene center. Together they cover the
scene with little occlusion. All placement constants live in RENDER.

Calculation:
    c = center of the scene box, diag = box diagonal
    bev:   orthographic, position (c.x, c.y, max.z + diag), look_at c,
           up +y, ortho_extent = max(dx, dy) * 1.05
    front (0, -1), left (-1, 0), right (1, 0), back (0, 1):
           perspective, position = c + (cx * r * cos(45), cy * r * cos(45),
           r * sin(45)) with r = 1.2 * diag, look_at c, up +z, vfov 60

Args:
    scene_aabb (Aabb3): Bounds of the scene points

Kwargs:
    margin (float): BEV extent margin. Default: 1.05
    distance (float): Oblique distance in box diagonals. Default: 1.2
    elevation (float): Oblique elevation, degrees. Default: 45
    vfov (float): Oblique vertical field of view, degrees. Default: 60

Returns:
    list: 5 CameraSpec in the order bev, front, left, right, back

Raises:
    RenderError: zero-area xy footprint
"""
