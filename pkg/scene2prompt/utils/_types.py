# -*- coding: utf-8 -*-
from dataclasses import dataclass, field
from math import isfinite, tau
from typing import Optional, Tuple

from numpy import array, float64, ndarray, uint8

from ._errors import GeometryError


@dataclass(frozen=True)
class Point3:
    """World-frame point in meters, z-up."""
    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(isfinite(v) for v in (self.x, self.y, self.z)):
            raise GeometryError(f"[X] Point3 coordinates must be finite: {self.as_tuple()}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def __add__(self, other: "Point3") -> "Point3":
        return Point3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Point3") -> "Point3":
        return Point3(self.x - other.x, self.y - other.y, self.z - other.z)

    @classmethod
    def of(cls, values) -> "Point3":
        x, y, z = (float(v) for v in values)
        return cls(x, y, z)


@dataclass(frozen=True)
class Aabb3:
    """Axis-aligned box. Zero volume is allowed."""
    min: Point3
    max: Point3

    def __post_init__(self):
        for axis in "xyz":
            lo, hi = getattr(self.min, axis), getattr(self.max, axis)
            if lo > hi:
                raise GeometryError(f"[X] Aabb3 min.{axis} > max.{axis}: {lo} > {hi}")

    @property
    def size(self) -> Tuple[float, float, float]:
        return (self.max.x - self.min.x, self.max.y - self.min.y, self.max.z - self.min.z)

    @property
    def volume(self) -> float:
        dx, dy, dz = self.size
        return dx * dy * dz

    @property
    def diagonal(self) -> float:
        dx, dy, dz = self.size
        return (dx * dx + dy * dy + dz * dz) ** 0.5

    def translate(self, offset: Point3) -> "Aabb3":
        return Aabb3(self.min + offset, self.max + offset)


@dataclass(frozen=True)
class ObjectProposal:
    class_label: str
    box: Aabb3
    confidence: float = 1.0

    def __post_init__(self):
        if not isinstance(self.class_label, str) or len(self.class_label.strip()) == 0:
            raise GeometryError("[X] ObjectProposal requires a nonempty class_label.")
        if not (0.0 <= self.confidence <= 1.0):
            raise GeometryError(f"[X] ObjectProposal confidence outside [0, 1]: {self.confidence}")


@dataclass(frozen=True)
class AgentSituation:
    """Agent pose in the scene. yaw is counterclockwise from +x, in [0, 2pi)."""
    position: Point3
    yaw: float
    description: str = ""

    def __post_init__(self):
        if not isfinite(self.yaw):
            raise GeometryError(f"[X] AgentSituation yaw must be finite: {self.yaw}")
        yaw = self.yaw % tau
        # float modulo can land exactly on tau for tiny negatives
        if yaw >= tau: yaw = 0.0
        object.__setattr__(self, "yaw", yaw)


@dataclass(frozen=True, eq=False)
class Scene:
    """Point cloud, pruned proposals and an optional situation.

    points is an (n, 3) float64 array, colors an (n, 3) uint8 array.
    """
    scene_id: str
    points: ndarray = field(repr=False)
    colors: ndarray = field(repr=False)
    proposals: Tuple[ObjectProposal, ...] = ()
    situation: Optional[AgentSituation] = None

    def __post_init__(self):
        if not isinstance(self.scene_id, str) or len(self.scene_id) == 0:
            raise GeometryError("[X] Scene requires a nonempty scene_id.")
        points = array(self.points, dtype=float64).reshape(-1, 3)
        colors = array(self.colors, dtype=uint8).reshape(-1, 3)
        if points.shape[0] != colors.shape[0]:
            raise GeometryError(f"[X] Scene points/colors length mismatch: {points.shape[0]} != {colors.shape[0]}")
        points.setflags(write=False)
        colors.setflags(write=False)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "proposals", tuple(self.proposals))

    @property
    def size(self) -> int:
        return self.points.shape[0]
