# -*- coding: utf-8 -*-
from numpy import zeros_like
from numpy.linalg import norm

from .backward import backward
from .toy_decoder_loss import loss_graph


def relative_error(analytic, numeric, floor: float = 1e-10) -> float:
    """Norm-wise relative error; absolute when both norms are below floor."""
    scale = max(norm(analytic), norm(numeric))
    diff = norm(analytic - numeric)
    return float(diff if scale < floor else diff / scale)


def numeric_gradient(model, example, name: str, h: float = 1e-5):
    """Central finite differences of the loss w.r.t. one tensor."""
    patches, targets, context = example
    tensor = model.params[name]
    grad = zeros_like(tensor)
    flat, gflat = tensor.reshape(-1), grad.reshape(-1)
    for i in range(flat.shape[0]):
        original = flat[i]
        flat[i] = original + h
        up = loss_graph(model, patches, targets, context).loss
        flat[i] = original - h
        down = loss_graph(model, patches, targets, context).loss
        flat[i] = original
        gflat[i] = (up - down) / (2.0 * h)
    return grad


def gradient_check(model, example, h: float = 1e-5, names=None) -> dict:
    """Per-tensor relative error between backward and central differences.

    example is (patches, target_ids, context_ids). The model is perturbed in
    place and restored exactly.
    """
    patches, targets, *rest = example
    example = (patches, targets, rest[0] if rest else ())
    analytic = backward(loss_graph(model, *example))
    names = names if names is not None else model.names()
    return {name: relative_error(analytic[name], numeric_gradient(model, example, name, h)) for name in names}
