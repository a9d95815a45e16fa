# -*- coding: utf-8 -*-
from io import BytesIO
from pathlib import Path

from PIL import Image

from scene2prompt.geometry import scene_bounds
from scene2prompt.utils import RenderError, Scene, get_logger, write_if_changed

from ._camera import RenderConfig
from .plan_cameras import plan_cameras
from .render_view import render_view


def render_scene(scene: Scene, width: int = None, height: int = None, config: RenderConfig = None, **kwargs) -> list:
    """Render: Five Scene Views"""
    # Validate Arguments
    config = config if config is not None else RenderConfig(
        **{k: v for k, v in (("width", width), ("height", height)) if v is not None}, **kwargs
    )
    if scene.size == 0:
        raise RenderError(f"[X] Scene '{scene.scene_id}' has no points to render")

    # Calculate Result
    cameras = plan_cameras(scene_bounds(scene.points))
    views = [
        render_view(scene, camera, config.width, config.height, config.splat_radius, numba=config.numba)
        for camera in cameras
    ]
    get_logger().debug(f"{scene.scene_id}: rendered {len(views)} views at {config.width}x{config.height}")
    return views


def encode_png(view) -> bytes:
    """8-bit RGB PNG bytes of a view."""
    buffer = BytesIO()
    Image.fromarray(view.image).save(buffer, format="PNG")
    return buffer.getvalue()


def view_filename(scene_id: str, view_id: str) -> str:
    return f"{scene_id}_{view_id}.png"


def save_views(views, out_dir, scene_id: str) -> list:
    """Writes {scene_id}_{view_id}.png per view, skipping unchanged files.
    Returns the paths in view order."""
    out_dir = Path(out_dir)
    paths = []
    for view in views:
        path = out_dir / view_filename(scene_id, view.view_id)
        write_if_changed(path, encode_png(view))
        paths.append(path)
    return paths


render_scene.__doc__ = \
"""Five Scene Views

Renders the bird's-eye view and the four oblique cardinal views of a scene,
giving the prompt a fixed image sequence with broad coverage.

Calculation:
    cameras = plan_cameras(scene_bounds(points))
    views = [render_view(scene, camera) for camera in cameras]

Args:
    scene (Scene): Scene with points
    width (int): Image width. Default: 448
    height (int): Image height. Default: 448
    config (RenderConfig): Overrides width, height, splat_radius, numba

Returns:
    list: 5 RenderedView in the order bev, front, left, right, back
"""
