# -*- coding: utf-8 -*-
from dataclasses import replace
from math import isclose

from scene2prompt.utils import PruneError

from .nms_prune import PruneConfig, nms_prune

TIE_TOLERANCE = 1e-9


def majority_relabel(kept, clusters, config: PruneConfig = None, **kwargs) -> list:
    """Pruning: Majority Vote Relabeling"""
    # Validate Arguments
    config = config if config is not None else PruneConfig(**kwargs)
    clusters = clusters if clusters is not None else {}
    if any(k < 0 or k >= len(kept) for k in clusters):
        raise PruneError("[X] cluster keys must index the kept list")

    # Calculate Result
    result = []
    for k, proposal in enumerate(kept):
        votes = {}
        for member in [proposal] + list(clusters.get(k, [])):
            weight = member.confidence if config.vote_weighting == "confidence" else 1.0
            votes[member.class_label] = votes.get(member.class_label, 0.0) + weight

        best = max(votes.values())
        # insertion order puts the kept proposal's own label first
        winner = next(label for label, w in votes.items() if isclose(w, best, rel_tol=TIE_TOLERANCE))
        result.append(proposal if winner == proposal.class_label else replace(proposal, class_label=winner))

    return result


def prune_proposals(proposals, config: PruneConfig = None, **kwargs) -> list:
    """nms_prune followed by majority_relabel."""
    config = config if config is not None else PruneConfig(**kwargs)
    kept, clusters = nms_prune(proposals, config)
    return majority_relabel(kept, clusters, config)


majority_relabel.__doc__ = \
"""Majority Vote Relabeling

Proposals suppressed by NMS still carry evidence about the class of the
region they overlap. Each kept proposal takes the weighted modal class of
itself and its cluster; ties go to the kept proposal's original class. Boxes
and confidences are unchanged.

Calculation:
    w(p) = confidence(p) if vote_weighting == 'confidence' else 1
    votes[c] = sum of w(p) over {kept} U cluster with class c
    label = argmax votes, ties -> kept label

Args:
    kept (list): ObjectProposal from nms_prune
    clusters (dict): position in kept -> suppressed proposals
    config (PruneConfig): Default: PruneConfig()

Kwargs:
    vote_weighting (str): Used when config is None. Default: 'confidence'

Returns:
    list: ObjectProposal, one per kept proposal, in the same order
"""
