# -*- coding: utf-8 -*-
from scene2prompt import RENDER
from scene2prompt.utils import RenderError, Scene

from ._camera import CameraSpec, RenderedView
from ._raster import rasterize
from .project_point import project_points


def render_view(scene: Scene, camera: CameraSpec, width: int = None, height: int = None, splat_radius: int = None, numba: bool = None, **kwargs) -> RenderedView:
    """Render: Point Splat View"""
    # Validate Arguments
    width = int(width) if width is not None else RENDER["WIDTH"]
    height = int(height) if height is not None else RENDER["HEIGHT"]
    splat_radius = int(splat_radius) if splat_radius is not None else RENDER["SPLAT_RADIUS"]
    background = kwargs.pop("background", RENDER["BACKGROUND"])
    if width <= 0 or height <= 0:
        raise RenderError(f"[X] Zero-size image requested: {width}x{height}")
    if splat_radius < 0:
        raise RenderError(f"[X] splat_radius must be >= 0, got {splat_radius}")
    if scene.size == 0:
        raise RenderError(f"[X] Scene '{scene.scene_id}' has no points to render")

    # Calculate Result
    px, py, depth, front = project_points(camera, scene.points, width, height)
    image, zbuf = rasterize(px, py, depth, front, scene.colors, width, height, splat_radius, background, numba=numba)
    image.setflags(write=False)
    zbuf.setflags(write=False)

    return RenderedView(camera.view_id, camera, image, zbuf)


render_view.__doc__ = \
"""Point Splat View

Rasterizes the point cloud through one camera. Each point is splatted as a
filled disc of splat_radius pixels in its own color; a z-buffer keeps the
nearest splat per pixel (equal depths keep the earlier point). There is no
lighting or shading and the background is white. Output is deterministic.

Calculation:
    (px, py, depth) = project(camera, p)
    disc pixels: floor(px) + dx, floor(py) + dy with dx^2 + dy^2 <= r^2
    pixel <- color of argmin depth

Args:
    scene (Scene): Scene with at least one point
    camera (CameraSpec): The camera
    width (int): Image width. Default: 448
    height (int): Image height. Default: 448
    splat_radius (int): Disc radius in pixels. Default: 2
    numba (bool): Use the numba kernel if installed. Default: True

Kwargs:
    background (tuple): RGB background. Default: (255, 255, 255)

Returns:
    RenderedView: image (H, W, 3) uint8 and depth (H, W), inf on background
"""
