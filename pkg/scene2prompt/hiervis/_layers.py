# -*- coding: utf-8 -*-
"""Forward and backward kernels of the pre-norm cross-attention block.

Every forward returns (output, cache); every backward takes the cache and the
upstream gradient. Arrays are float64 and 2-d (tokens, features).
"""
from math import pi, sqrt

from numpy import exp, log, tanh, where
from numpy import max as npMax
from numpy import sum as npSum

from scene2prompt import HIERARCHY
from scene2prompt.utils import HierarchyError


BLOCK_TENSORS = (
    "ln_q.gain", "ln_q.bias", "ln_kv.gain", "ln_kv.bias",
    "wq", "wk", "wv", "wo", "bo",
    "ln_ff.gain", "ln_ff.bias", "w1", "b1", "w2", "b2",
)
GELU_C = sqrt(2.0 / pi)


def layer_norm(x, gain, bias, eps=HIERARCHY["LN_EPS"]):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    inv = 1.0 / (((xc * xc).mean(axis=-1, keepdims=True) + eps) ** 0.5)
    xhat = xc * inv
    return xhat * gain + bias, (xhat, inv, gain)


def layer_norm_backward(dy, cache):
    xhat, inv, gain = cache
    dgain = npSum(dy * xhat, axis=0)
    dbias = npSum(dy, axis=0)
    dxhat = dy * gain
    dx = inv * (dxhat - dxhat.mean(axis=-1, keepdims=True) - xhat * (dxhat * xhat).mean(axis=-1, keepdims=True))
    return dx, dgain, dbias


def gelu(x):
    """tanh approximation"""
    t = tanh(GELU_C * (x + 0.044715 * x ** 3))
    return 0.5 * x * (1.0 + t), (x, t)


def gelu_backward(dy, cache):
    x, t = cache
    dt = GELU_C * (1.0 + 3.0 * 0.044715 * x * x)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * dt)


def softmax(scores, mask=None):
    """Row softmax over the last axis; masked-out entries get weight 0."""
    if mask is not None:
        scores = where(mask, scores, -1e300)
    shifted = scores - npMax(scores, axis=-1, keepdims=True)
    e = exp(shifted)
    if mask is not None:
        e = where(mask, e, 0.0)
    return e / npSum(e, axis=-1, keepdims=True)


def softmax_backward(dA, A):
    return A * (dA - npSum(dA * A, axis=-1, keepdims=True))


def log_softmax(logits):
    shifted = logits - npMax(logits, axis=-1, keepdims=True)
    return shifted - log(npSum(exp(shifted), axis=-1, keepdims=True))


def split_heads(x, heads):
    """(tokens, d) -> (heads, tokens, d / heads)"""
    n, d = x.shape
    return x.reshape(n, heads, d // heads).transpose(1, 0, 2)


def merge_heads(x):
    """(heads, tokens, dh) -> (tokens, heads * dh)"""
    h, n, dh = x.shape
    return x.transpose(1, 0, 2).reshape(n, h * dh)


def verify_block_inputs(params, queries, keys_values, heads):
    if queries.ndim != 2 or keys_values.ndim != 2:
        raise HierarchyError(f"[X] queries and keys_values must be 2-d, got {queries.shape} and {keys_values.shape}")
    d = params["wq"].shape[0]
    if queries.shape[1] != d or keys_values.shape[1] != d:
        raise HierarchyError(f"[X] Dimension mismatch: block dim {d}, queries {queries.shape[1]}, keys/values {keys_values.shape[1]}")
    if keys_values.shape[0] < 1:
        raise HierarchyError("[X] Attention needs at least one key")
    if d % heads != 0:
        raise HierarchyError(f"[X] {heads} heads do not divide dim {d}")


def block_forward(params, queries, keys_values, heads=HIERARCHY["HEADS"], mask=None):
    """Pre-norm multi-head cross-attention + residual, pre-norm FFN + residual."""
    verify_block_inputs(params, queries, keys_values, heads)
    dh = params["wq"].shape[0] // heads

    qn, c_lnq = layer_norm(queries, params["ln_q.gain"], params["ln_q.bias"])
    kvn, c_lnkv = layer_norm(keys_values, params["ln_kv.gain"], params["ln_kv.bias"])
    q = split_heads(qn @ params["wq"], heads)
    k = split_heads(kvn @ params["wk"], heads)
    v = split_heads(kvn @ params["wv"], heads)

    scores = (q @ k.transpose(0, 2, 1)) / sqrt(dh)
    A = softmax(scores, None if mask is None else mask[None, :, :])
    heads_out = A @ v
    o = merge_heads(heads_out)
    x1 = queries + o @ params["wo"] + params["bo"]

    hn, c_lnff = layer_norm(x1, params["ln_ff.gain"], params["ln_ff.bias"])
    hpre = hn @ params["w1"] + params["b1"]
    hact, c_gelu = gelu(hpre)
    out = x1 + hact @ params["w2"] + params["b2"]

    cache = {
        "heads": heads, "dh": dh, "mask": mask,
        "qn": qn, "kvn": kvn, "q": q, "k": k, "v": v, "A": A, "o": o,
        "hn": hn, "hact": hact,
        "ln_q": c_lnq, "ln_kv": c_lnkv, "ln_ff": c_lnff, "gelu": c_gelu,
    }
    return out, cache


def block_backward(params, dout, cache):
    """Returns (grads by block tensor name, d queries, d keys_values)."""
    grads = {}
    heads, dh = cache["heads"], cache["dh"]

    # FFN
    grads["w2"] = cache["hact"].T @ dout
    grads["b2"] = npSum(dout, axis=0)
    dhpre = gelu_backward(dout @ params["w2"].T, cache["gelu"])
    grads["w1"] = cache["hn"].T @ dhpre
    grads["b1"] = npSum(dhpre, axis=0)
    dx1, grads["ln_ff.gain"], grads["ln_ff.bias"] = layer_norm_backward(dhpre @ params["w1"].T, cache["ln_ff"])
    dx1 = dx1 + dout

    # Attention
    grads["wo"] = cache["o"].T @ dx1
    grads["bo"] = npSum(dx1, axis=0)
    dheads = split_heads(dx1 @ params["wo"].T, heads)
    A, q, k, v = cache["A"], cache["q"], cache["k"], cache["v"]
    dA = dheads @ v.transpose(0, 2, 1)
    dv = A.transpose(0, 2, 1) @ dheads
    dS = softmax_backward(dA, A) / sqrt(dh)
    dq = merge_heads(dS @ k)
    dk = merge_heads(dS.transpose(0, 2, 1) @ q)
    dv = merge_heads(dv)

    grads["wq"] = cache["qn"].T @ dq
    grads["wk"] = cache["kvn"].T @ dk
    grads["wv"] = cache["kvn"].T @ dv
    dqn = dq @ params["wq"].T
    dkvn = dk @ params["wk"].T + dv @ params["wv"].T

    dqueries, grads["ln_q.gain"], grads["ln_q.bias"] = layer_norm_backward(dqn, cache["ln_q"])
    dkv, grads["ln_kv.gain"], grads["ln_kv.bias"] = layer_norm_backward(dkvn, cache["ln_kv"])

    return grads, dqueries + dx1, dkv
