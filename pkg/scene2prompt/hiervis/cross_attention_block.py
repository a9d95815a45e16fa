# -*- coding: utf-8 -*-
from numpy import asarray, float64

from scene2prompt import HIERARCHY

from ._layers import block_forward


def cross_attention_block(params, queries, keys_values, heads: int = None, mask=None, weights: bool = False, **kwargs):
    """Hiervis: Cross-Attention Block"""
    # Validate Arguments
    heads = int(heads) if heads is not None else HIERARCHY["HEADS"]
    queries = asarray(queries, dtype=float64)
    keys_values = asarray(keys_values, dtype=float64)

    # Calculate Result
    out, cache = block_forward(params, queries, keys_values, heads, mask)

    return (out, cache["A"]) if weights else out


cross_attention_block.__doc__ = \
"""Cross-Attention Block

One transformer layer in which a few query tokens read from a set of
key/value tokens. Normalization comes before each sublayer and each sublayer
is added back to its input.

Calculation:
    q = LN_q(Q) Wq, k = LN_kv(KV) Wk, v = LN_kv(KV) Wv      (split in h heads)
    A = softmax(q k^T / sqrt(d / h))                        (per head, over keys)
    X = Q + concat(A v) Wo + bo
    out = X + W2 gelu(W1 LN_ff(X) + b1) + b2

Args:
    params (dict): Block tensors (HierarchicalModel.block(name))
    queries (array): (m, d) query tokens
    keys_values (array): (n, d) key/value tokens, n >= 1
    heads (int): Attention heads. Default: 4
    mask (array): Optional (m, n) bool, True where attention is allowed
    weights (bool): Also return the (heads, m, n) attention weights

Returns:
    numpy.ndarray: (m, d) outputs, or (outputs, weights)

Raises:
    HierarchyError: dimension mismatch or no keys
"""
