# -*- coding: utf-8 -*-
from numpy import asarray, float64, vstack

from scene2prompt.utils import HierarchyError

from ._layers import block_forward


def verify_patches(model, patches):
    patches = asarray(patches, dtype=float64)
    if patches.ndim != 3 or patches.shape[0] != model.views or patches.shape[2] != model.dim:
        raise HierarchyError(
            f"[X] Patches must be ({model.views}, N, {model.dim}), got {patches.shape}"
        )
    if patches.shape[1] < 1:
        raise HierarchyError("[X] Every view needs at least one patch")
    return patches


def view_tokens_with_cache(model, patches):
    params, queries = model.block("view"), model.params["query.view"]
    tokens, caches = [], []
    for m in range(model.views):
        out, cache = block_forward(params, queries[m:m + 1], patches[m], model.heads)
        tokens.append(out)
        caches.append(cache)
    return vstack(tokens), caches


def view_tokens(model, patches, **kwargs):
    """Hiervis: View-Level Tokens"""
    patches = verify_patches(model, patches)
    return view_tokens_with_cache(model, patches)[0]


view_tokens.__doc__ = \
"""View-Level Tokens

Compresses each rendered view into a single token: the view's own learned
query attends over that view's patch features only, through the shared view
block. Views never see each other at this level.

Calculation:
    V^m = Block_view(Q = q^m, KV = f^m_1..f^m_N),  m = 1..5

Args:
    model (HierarchicalModel): Parameters
    patches (array): (5, N, d) patch features per view

Returns:
    numpy.ndarray: (5, d) view tokens V^1..V^5
"""
