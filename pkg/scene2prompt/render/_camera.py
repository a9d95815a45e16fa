# -*- coding: utf-8 -*-
from dataclasses import dataclass, field
from typing import Optional, Tuple

from numpy import array as npArray
from numpy import cross, float64, ndarray
from numpy.linalg import norm

from scene2prompt import RENDER
from scene2prompt.utils import Point3, RenderError


KINDS = ("orthographic_topdown", "perspective_oblique")


@dataclass(frozen=True)
class CameraSpec:
    """One virtual camera. vfov (degrees) is used by perspective cameras and
    ortho_extent (meters across the shorter image side) by orthographic ones."""
    kind: str
    position: Point3
    look_at: Point3
    up: Tuple[float, float, float]
    vfov: Optional[float] = None
    ortho_extent: Optional[float] = None
    view_id: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RenderError(f"[X] Unknown camera kind '{self.kind}'")
        forward = npArray((self.look_at - self.position).as_tuple())
        if norm(forward) <= RENDER["NEAR"]:
            raise RenderError("[X] Camera position coincides with look_at")
        if norm(cross(forward / norm(forward), npArray(self.up, dtype=float64))) <= RENDER["NEAR"]:
            raise RenderError("[X] Camera up vector is parallel to the view direction")
        if self.kind == "perspective_oblique" and not (self.vfov is not None and 0.0 < self.vfov < 180.0):
            raise RenderError(f"[X] Perspective camera needs vfov in (0, 180), got {self.vfov}")
        if self.kind == "orthographic_topdown" and not (self.ortho_extent is not None and self.ortho_extent > 0.0):
            raise RenderError(f"[X] Orthographic camera needs a positive ortho_extent, got {self.ortho_extent}")

    @property
    def orthographic(self) -> bool:
        return self.kind == "orthographic_topdown"

    def basis(self) -> Tuple[ndarray, ndarray, ndarray]:
        """(right, up, forward) orthonormal camera axes in world space."""
        forward = npArray((self.look_at - self.position).as_tuple())
        forward = forward / norm(forward)
        right = cross(forward, npArray(self.up, dtype=float64))
        right = right / norm(right)
        up = cross(right, forward)
        return right, up, forward


@dataclass(frozen=True, eq=False)
class RenderedView:
    """image is (H, W, 3) uint8; depth is (H, W) float64, inf on background."""
    view_id: str
    camera: CameraSpec
    image: ndarray = field(repr=False)
    depth: ndarray = field(repr=False)

    @property
    def width(self) -> int:
        return self.image.shape[1]

    @property
    def height(self) -> int:
        return self.image.shape[0]


@dataclass
class RenderConfig:
    """Raster settings.

    numba (bool): Use the numba splat kernel when available. Default: None (auto)
    """
    width: int = RENDER["WIDTH"]
    height: int = RENDER["HEIGHT"]
    splat_radius: int = RENDER["SPLAT_RADIUS"]
    numba: Optional[bool] = None

    def __post_init__(self):
        if int(self.width) <= 0 or int(self.height) <= 0:
            raise RenderError(f"[X] Image size must be positive, got {self.width}x{self.height}")
        if int(self.splat_radius) < 0:
            raise RenderError(f"[X] splat_radius must be >= 0, got {self.splat_radius}")
        self.width, self.height, self.splat_radius = int(self.width), int(self.height), int(self.splat_radius)
