# -*- coding: utf-8 -*-
from ._format import (
    DescriptionConfig, SceneDescription,
    format_coordinates, object_token, verify_proposals
)


CT_PREFIX = "In the scene there are the following objects: "


def coordinate_description(scene, config: DescriptionConfig = None, **kwargs) -> SceneDescription:
    """Describe: Coordinate Text (CT)"""
    # Validate Arguments
    config = config if config is not None else DescriptionConfig(**kwargs)
    proposals = verify_proposals(scene)

    # Calculate Result
    items = [
        f"{object_token(p.class_label)} at {format_coordinates(p, config.precision)}"
        for p in proposals
    ]
    text = CT_PREFIX + ", ".join(items) + "."

    return SceneDescription(text, tuple(range(len(proposals))), "CT")


coordinate_description.__doc__ = \
"""Coordinate Text (CT)

The 3D scene text description: every pruned object as an angle-bracketed
class token followed by its box center, in input order.

Sources:
    "In the scene there are the following objects: <monitor> at
    [-0.19, 1.37, 0.96], ..."

Calculation:
    center = (box.min + box.max) / 2
    coordinates rounded half to even at 2 (default) or 4 decimals

Args:
    scene (Scene): Scene with at least one proposal
    config (DescriptionConfig): Default: DescriptionConfig()

Kwargs:
    precision (int): Used when config is None. Default: 2

Returns:
    SceneDescription: text and object_order (proposal indices)
"""
