# -*- coding: utf-8 -*-
from itertools import groupby

from scene2prompt.geometry import bbox_center
from scene2prompt.utils import DescriptionError

from ._format import (
    DescriptionConfig, SceneDescription,
    format_coordinates, object_token, verify_proposals
)
from .clock_hour import clock_hour
from .coordinate_description import coordinate_description


def directional_description(scene, config: DescriptionConfig = None, **kwargs) -> SceneDescription:
    """Describe: Coordinate & Direction Text (CDT)"""
    # Validate Arguments
    config = config if config is not None else DescriptionConfig(mode="CDT", **kwargs)
    if scene.situation is None:
        raise DescriptionError(f"[X] Scene '{scene.scene_id}' has no agent situation; CDT needs position and yaw")
    proposals = verify_proposals(scene)

    # Calculate Result
    hours = [clock_hour(scene.situation, bbox_center(p.box).as_tuple()) for p in proposals]
    order = sorted(range(len(proposals)), key=lambda i: (hours[i], i))

    sentences = []
    for hour, group in groupby(order, key=lambda i: hours[i]):
        items = [
            f"{object_token(proposals[i].class_label)} {format_coordinates(proposals[i], config.precision)}"
            for i in group
        ]
        sentences.append(f"To my {hour} o'clock there is a " + ", and ".join(items) + ".")

    return SceneDescription(" ".join(sentences), tuple(order), "CDT")


def situated_description(scene, config: DescriptionConfig = None, **kwargs) -> SceneDescription:
    """Text for the configured setting: CT for text-only situations, CDT
    (optionally followed by the CT list) when the agent pose is known."""
    config = config if config is not None else DescriptionConfig(**kwargs)
    if config.mode == "CT":
        return coordinate_description(scene, config)

    cdt = directional_description(scene, config)
    if not config.append_coordinates:
        return cdt
    ct = coordinate_description(scene, config)
    return SceneDescription(f"{cdt.text} {ct.text}", cdt.object_order, "CDT")


directional_description.__doc__ = \
"""Coordinate & Direction Text (CDT)

Enriches the scene description with the agent's point of view: objects are
grouped by their clock-hour bearing from the agent, hours ascending from 1
to 12, and objects sharing an hour are joined in one sentence. Coordinates
are formatted exactly as in the coordinate text.

Sources:
    "To my 12 o'clock there is a <monitor> [-0.19, 1.37, 0.96]."

Calculation:
    hour_i = clock_hour(situation, center_i)
    one sentence per hour:
        "To my H o'clock there is a <a> [x, y, z], and <b> [x, y, z]."

Args:
    scene (Scene): Scene with proposals and a situation
    config (DescriptionConfig): Default: DescriptionConfig(mode='CDT')

Kwargs:
    precision (int): Used when config is None. Default: 2

Returns:
    SceneDescription: text and object_order (proposal indices by hour)

Raises:
    DescriptionError: missing situation, no proposals or an object centered
        on the agent
"""
