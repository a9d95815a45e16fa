# -*- coding: utf-8 -*-
from numpy import add as npAdd
from numpy import arange, sum as npSum, zeros_like

from scene2prompt.utils import HierarchyError

from ._layers import block_backward, layer_norm_backward
from .toy_decoder_loss import LossGraph


def _accumulate(grads, prefix, block_grads):
    for name, value in block_grads.items():
        grads[f"{prefix}.{name}"] += value


def backward(graph: LossGraph, scale: float = 1.0) -> dict:
    """Hiervis: Backward Pass"""
    # Validate Arguments
    if not isinstance(graph, LossGraph) or graph.cache is None or graph.hierarchy.trace is None:
        raise HierarchyError("[X] backward needs a LossGraph recorded by loss_graph")
    model, cache, trace = graph.model, graph.cache, graph.hierarchy.trace
    p = model.params
    grads = {name: zeros_like(value) for name, value in p.items()}
    nf, nc, L = cache["nf"], cache["nc"], cache["L"]

    # Calculate Result
    # decoder head: d(-sum log p) / d logits = p - onehot
    dlogits = cache["probs"].copy()
    dlogits[arange(L), cache["targets"]] -= 1.0
    dlogits *= scale
    grads["decoder.w_out"] += cache["Hn"].T @ dlogits
    grads["decoder.b_out"] += npSum(dlogits, axis=0)
    dH, dg, db = layer_norm_backward(dlogits @ p["decoder.w_out"].T, cache["ln_out"])
    grads["decoder.ln_out.gain"] += dg
    grads["decoder.ln_out.bias"] += db

    block_grads, dX, dkv = block_backward(model.block("decoder"), dH, cache["block"])
    _accumulate(grads, "decoder", block_grads)
    dX = dX + dkv[nf + nc:]
    npAdd.at(grads["decoder.embed"], cache["inputs"], dX)
    npAdd.at(grads["decoder.embed"], cache["context"], dkv[nf:nf + nc])
    grads["decoder.pos"][:L] += dX

    # f_v: patches are inputs; view tokens and the scene token carry gradient
    views, n = model.views, graph.hierarchy.patches_per_view
    dview = dkv[views * n:views * n + views].copy()
    dscene = dkv[views * n + views:views * n + views + 1]

    block_grads, dq_scene, dview_kv = block_backward(model.block("scene"), dscene, trace["scene"])
    _accumulate(grads, "scene", block_grads)
    grads["query.scene"] += dq_scene
    dview += dview_kv

    for m in range(views):
        block_grads, dq_view, _ = block_backward(model.block("view"), dview[m:m + 1], trace["view"][m])
        _accumulate(grads, "view", block_grads)
        grads["query.view"][m:m + 1] += dq_view

    return grads


backward.__doc__ = \
"""Backward Pass

Exact analytic gradients of the toy decoder loss with respect to every
trainable tensor: the three attention blocks, the view and scene queries and
the decoder embeddings, norm and head. Patch features are inputs and get no
gradient. Gradients are linear in scale, so scaling the loss scales every
gradient by the same factor.

Calculation:
    dlogits = softmax(logits) - onehot(targets)
    reverse through output norm, decoder block (causal), the scene block and
    the view block once per view, summing shared-tensor contributions

Args:
    graph (LossGraph): Recorded by loss_graph
    scale (float): Multiplier of the loss. Default: 1.0

Returns:
    dict: parameter name -> gradient, same shapes as model.params
"""
