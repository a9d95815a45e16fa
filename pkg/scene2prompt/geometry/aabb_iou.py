# -*- coding: utf-8 -*-
from scene2prompt.utils import Aabb3, verify_box


def aabb_iou(a: Aabb3, b: Aabb3) -> float:
    """Geometry: Axis-Aligned Box Intersection over Union (IoU)"""
    # Validate Arguments
    a, b = verify_box(a), verify_box(b)

    # Calculate Result
    inter = 1.0
    for axis in "xyz":
        lo = max(getattr(a.min, axis), getattr(b.min, axis))
        hi = min(getattr(a.max, axis), getattr(b.max, axis))
        if hi <= lo: return 0.0
        inter *= hi - lo

    union = a.volume + b.volume - inter
    if union <= 0.0: return 0.0

    return min(1.0, max(0.0, inter / union))


aabb_iou.__doc__ = \
"""Axis-Aligned Box Intersection over Union (IoU)

The overlap ratio of two axis-aligned 3D boxes; the similarity used by the
non-maximum suppression that prunes redundant object proposals.

Calculation:
    I = PROD(max(0, min(a.max, b.max) - max(a.min, b.min)))  over x, y, z
    IOU = I / (VOL(a) + VOL(b) - I)

    Disjoint boxes, boxes touching on a face and zero-volume pairs return 0.

Args:
    a (Aabb3): First box
    b (Aabb3): Second box

Returns:
    float: IoU in [0, 1]
"""
