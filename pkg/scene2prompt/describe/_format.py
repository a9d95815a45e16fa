# -*- coding: utf-8 -*-
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Tuple

from scene2prompt.geometry import bbox_center
from scene2prompt.utils import DescriptionError


MODES = ("CT", "CDT")
PRECISIONS = (2, 4)


@dataclass
class DescriptionConfig:
    """Scene text description settings.

    precision (int): Decimal places of coordinates, 2 or 4
    mode (str): 'CT' coordinates only, 'CDT' clock direction + coordinates
    append_coordinates (bool): CDT followed by the plain CT list
    """
    precision: int = 2
    mode: str = "CT"
    append_coordinates: bool = False

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise DescriptionError(f"[X] precision must be one of {PRECISIONS}, got {self.precision}")
        self.mode = str(self.mode).upper()
        if self.mode not in MODES:
            raise DescriptionError(f"[X] mode must be one of {MODES}, got '{self.mode}'")


@dataclass(frozen=True)
class SceneDescription:
    """Description text and the proposal indices in emission order."""
    text: str
    object_order: Tuple[int, ...]
    mode: str = "CT"


def format_number(value: float, precision: int = 2) -> str:
    """Round half to even on the shortest decimal repr; never '-0.00'."""
    quantum = Decimal(1).scaleb(-precision)
    rounded = Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_EVEN)
    if rounded.is_zero(): rounded = abs(rounded)
    return f"{rounded:.{precision}f}"


def format_coordinates(proposal, precision: int = 2) -> str:
    c = bbox_center(proposal.box)
    return "[" + ", ".join(format_number(v, precision) for v in c.as_tuple()) + "]"


def object_token(label: str) -> str:
    return f"<{label}>"


def verify_proposals(scene) -> list:
    proposals = list(scene.proposals)
    if len(proposals) == 0:
        raise DescriptionError(f"[X] Scene '{scene.scene_id}' has no proposals to describe")
    return proposals
