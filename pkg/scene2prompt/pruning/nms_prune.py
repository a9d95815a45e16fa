# -*- coding: utf-8 -*-
from dataclasses import dataclass

from scene2prompt.geometry import aabb_iou
from scene2prompt.utils import ObjectProposal, PruneError


VOTE_WEIGHTINGS = ("count", "confidence")


@dataclass
class PruneConfig:
    """Proposal pruning settings.

    iou_threshold (float): Suppress boxes overlapping a kept box above it. In (0, 1]
    vote_weighting (str): 'confidence' or 'count' votes in majority_relabel
    """
    iou_threshold: float = 0.5
    vote_weighting: str = "confidence"

    def __post_init__(self):
        self.iou_threshold = float(self.iou_threshold)
        if not (0.0 < self.iou_threshold <= 1.0):
            raise PruneError(f"[X] iou_threshold must be in (0, 1], got {self.iou_threshold}")
        if self.vote_weighting not in VOTE_WEIGHTINGS:
            raise PruneError(f"[X] vote_weighting must be one of {VOTE_WEIGHTINGS}, got '{self.vote_weighting}'")


def nms_prune(proposals, config: PruneConfig = None, **kwargs):
    """Pruning: Greedy 3D Non-Maximum Suppression"""
    # Validate Arguments
    config = config if config is not None else PruneConfig(**kwargs)
    proposals = list(proposals)
    for p in proposals:
        if not isinstance(p, ObjectProposal):
            raise PruneError(f"[X] nms_prune expects ObjectProposal, got {type(p).__name__}")

    # Calculate Result
    order = sorted(range(len(proposals)), key=lambda i: (-proposals[i].confidence, i))
    suppressed = [False] * len(proposals)
    kept, clusters = [], {}

    for rank, i in enumerate(order):
        if suppressed[i]: continue
        k = len(kept)
        kept.append(proposals[i])
        clusters[k] = []
        for j in order[rank + 1:]:
            if not suppressed[j] and aabb_iou(proposals[i].box, proposals[j].box) > config.iou_threshold:
                suppressed[j] = True
                clusters[k].append(proposals[j])

    return kept, clusters


nms_prune.__doc__ = \
"""Greedy 3D Non-Maximum Suppression

An instance segmenter emits many overlapping proposals for one physical
object. Greedy NMS visits proposals by descending confidence (ties by
ascending input index), keeps the first unsuppressed one and suppresses every
remaining proposal whose box IoU with it exceeds the threshold. Each
suppressed proposal is recorded in the cluster of the kept proposal that
suppressed it so the overlap region can vote on the class afterwards.

Calculation:
    order = argsort(-confidence, index)
    for i in order, unless suppressed:
        keep i
        suppress every later j with IoU(i, j) > iou_threshold

Args:
    proposals (list): ObjectProposal
    config (PruneConfig): iou_threshold and vote_weighting. Default: PruneConfig()

Kwargs:
    iou_threshold (float): Used when config is None. Default: 0.5

Returns:
    tuple: kept (list of ObjectProposal, in selection order),
        clusters (dict: position in kept -> list of suppressed ObjectProposal)
"""
