# -*- coding: utf-8 -*-
from math import isfinite
from time import perf_counter

from numpy import array as npArray

from scene2prompt import Imports
from scene2prompt.utils import HierarchyError, final_time, get_logger

from ._model import HierarchyConfig, init_model
from .backward import backward
from .toy_decoder_loss import loss_graph


def _unpack(example):
    if isinstance(example, dict):
        return example["patches"], example["targets"], example.get("context", ())
    patches, targets, *rest = example
    return patches, targets, rest[0] if rest else ()


def train_toy(examples, steps: int = 500, lr: float = 0.05, model=None, config: HierarchyConfig = None, vocab_size: int = None, seed: int = 0, verbose: bool = False, **kwargs):
    """Hiervis: Toy Training"""
    # Validate Arguments
    examples = [_unpack(e) for e in examples]
    if len(examples) == 0:
        raise HierarchyError("[X] train_toy needs at least one example")
    steps, lr = int(steps), float(lr)
    if steps < 0:
        raise HierarchyError(f"[X] steps must be >= 0, got {steps}")
    if model is None:
        if vocab_size is None:
            vocab_size = 1 + max(max(list(t) + list(c)) for _, t, c in examples)
        model = init_model(config, max(2, vocab_size), seed)
    else:
        model = model.copy()

    # Calculate Result
    stime = perf_counter()
    losses = []
    iterator = range(steps)
    if Imports["tqdm"] and verbose:
        from tqdm import tqdm
        iterator = tqdm(iterator, "[i] Training")

    for step in iterator:
        total, grads = 0.0, None
        for patches, targets, context in examples:
            graph = loss_graph(model, patches, targets, context)
            g = backward(graph)
            total += graph.loss
            if grads is None:
                grads = g
            else:
                for name in grads: grads[name] += g[name]
        if not isfinite(total):
            raise HierarchyError(f"[X] Loss became non-finite at step {step}", step=step)
        losses.append(total)
        for name, value in model.params.items():
            value -= lr * grads[name]

    if verbose:
        get_logger().info(f"train_toy: {steps} steps, loss {losses[0] if losses else float('nan'):.4f} -> {losses[-1] if losses else float('nan'):.4f}, {final_time(stime)}")

    return npArray(losses), model


train_toy.__doc__ = \
"""Toy Training

Plain full-batch gradient descent of the hierarchy and toy decoder on a
handful of examples. Deterministic for a fixed seed. The loss recorded at
each step is the summed loss before that step's update.

Calculation:
    for step in range(steps):
        loss, grads = sum over examples of loss_graph, backward
        theta -= lr * grads

Args:
    examples (list): (patches, target_ids[, context_ids]) tuples or dicts
        with 'patches', 'targets' and optional 'context'
    steps (int): Update steps. Default: 500
    lr (float): Learning rate. Default: 0.05
    model (HierarchicalModel): Starting point, copied. Default: init_model
    config (HierarchyConfig): Sizes when model is None
    vocab_size (int): Vocabulary when model is None. Default: max id + 1
    seed (int): Initialization seed when model is None. Default: 0
    verbose (bool): Progress bar and summary. Default: False

Returns:
    tuple: (losses numpy.ndarray of length steps, trained HierarchicalModel)

Raises:
    HierarchyError: non-finite loss, with the failing step
"""
