# -*- coding: utf-8 -*-
from dataclasses import dataclass, field

from numpy import arange, array as npArray
from numpy import exp, int64, ones, tril, vstack

from scene2prompt.utils import HierarchyError

from ._layers import block_forward, layer_norm, log_softmax
from .assemble_hierarchy import FeatureHierarchy, hierarchy_forward


@dataclass(frozen=True, eq=False)
class LossGraph:
    """A recorded forward pass: everything backward needs."""
    model: object = field(repr=False)
    hierarchy: FeatureHierarchy = field(repr=False)
    loss: float = 0.0
    log_probs: object = field(default=None, repr=False)
    cache: dict = field(default=None, repr=False)


def verify_ids(model, ids, what: str):
    ids = npArray(list(ids), dtype=int64).reshape(-1)
    bad = (ids < 0) | (ids >= model.vocab_size)
    if bad.any():
        raise HierarchyError(f"[X] {what} id {int(ids[bad.argmax()])} outside vocabulary of size {model.vocab_size}")
    return ids


def decoder_forward(model, f_v, target_ids, context_ids=()):
    """Teacher-forced decoder pass. Returns (loss, target log-probs, cache)."""
    targets = verify_ids(model, target_ids, "Target")
    context = verify_ids(model, context_ids, "Context")
    L, nf, nc = targets.shape[0], f_v.shape[0], context.shape[0]
    if L < 1:
        raise HierarchyError("[X] Target sequence must have at least one token")
    if L > model.max_answer:
        raise HierarchyError(f"[X] Target length {L} exceeds the decoder's {model.max_answer} positions")
    if f_v.shape[1] != model.dim:
        raise HierarchyError(f"[X] f_v dim {f_v.shape[1]} does not match model dim {model.dim}")

    p = model.params
    inputs = npArray([0] + list(targets[:-1]), dtype=int64)     # <bos> shifts the targets right
    X = p["decoder.embed"][inputs] + p["decoder.pos"][:L]
    C = p["decoder.embed"][context]
    kv = vstack([f_v, C, X])

    mask = ones((L, nf + nc + L), dtype=bool)
    mask[:, nf + nc:] = tril(ones((L, L), dtype=bool))

    H, c_block = block_forward(model.block("decoder"), X, kv, model.heads, mask)
    Hn, c_ln = layer_norm(H, p["decoder.ln_out.gain"], p["decoder.ln_out.bias"])
    logits = Hn @ p["decoder.w_out"] + p["decoder.b_out"]
    logp = log_softmax(logits)
    picked = logp[arange(L), targets]

    cache = {
        "targets": targets, "context": context, "inputs": inputs,
        "nf": nf, "nc": nc, "L": L, "block": c_block, "ln_out": c_ln,
        "Hn": Hn, "probs": exp(logp),
    }
    return float(-picked.sum()), picked, cache


def toy_decoder_loss(model, hierarchy: FeatureHierarchy, target_token_ids, context_ids=(), **kwargs):
    """Hiervis: Toy Decoder Loss"""
    loss, picked, _ = decoder_forward(model, hierarchy.f_v, target_token_ids, context_ids)
    return loss, picked


def loss_graph(model, patches, target_token_ids, context_ids=()) -> LossGraph:
    """Full forward pass (hierarchy and decoder) recorded for backward."""
    hierarchy = hierarchy_forward(model, patches)
    loss, picked, cache = decoder_forward(model, hierarchy.f_v, target_token_ids, context_ids)
    return LossGraph(model, hierarchy, loss, picked, cache)


toy_decoder_loss.__doc__ = \
"""Toy Decoder Loss

A small surrogate for the language model: answer tokens are predicted one
at a time while attending to the whole hierarchical visual sequence and to
the embedded context tokens (scene text, situation and question). Training
is teacher-forced: position i sees the targets before i, never its own.

Calculation:
    x_i = E[a_{i-1}] + P_i,  a_0 = <bos>
    h = Block_dec(Q = x, KV = [F_v; E[context]; x], causal over x)
    log p_i = log_softmax(LN(h_i) W_out + b_out)
    loss = - sum_i log p_i[a_i]

Args:
    model (HierarchicalModel): Parameters
    hierarchy (FeatureHierarchy): Output of hierarchy_forward
    target_token_ids (list): Answer token ids, 1 <= L <= max_answer
    context_ids (list): Context token ids. Default: ()

Returns:
    tuple: (loss, (L,) log-probabilities of the targets)

Raises:
    HierarchyError: token id outside the vocabulary or empty target
"""
