# -*- coding: utf-8 -*-
from numpy import asarray, float64

from scene2prompt.utils import HierarchyError

from ._layers import block_forward


def scene_token_with_cache(model, tokens):
    return block_forward(model.block("scene"), model.params["query.scene"], tokens, model.heads)


def scene_token(model, view_tokens, **kwargs):
    """Hiervis: Scene-Level Token"""
    tokens = asarray(view_tokens, dtype=float64)
    if tokens.ndim != 2 or tokens.shape[0] != model.views:
        raise HierarchyError(f"[X] Expected {model.views} view tokens, got shape {tokens.shape}")
    return scene_token_with_cache(model, tokens)[0]


scene_token.__doc__ = \
"""Scene-Level Token

A single global scene query attends over the five view tokens through the
scene block, summarizing the whole scene in one token. Being attention over a
set of keys, it does not depend on the order of the view tokens.

Calculation:
    S = Block_scene(Q = q, KV = V^1..V^5)

Args:
    model (HierarchicalModel): Parameters
    view_tokens (array): (5, d) view tokens

Returns:
    numpy.ndarray: (1, d) scene token
"""
