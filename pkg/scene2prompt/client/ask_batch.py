# -*- coding: utf-8 -*-
from multiprocessing.pool import ThreadPool
from time import perf_counter

import httpx
from numpy.random import default_rng

from scene2prompt import Imports
from scene2prompt.utils import Scene2PromptError, final_time, get_logger, progress

from ._cache import ResponseCache
from ._endpoint import EndpointConfig
from .ask import ask


def _error_record(bundle, ex: Exception) -> dict:
    return {
        "question_id": bundle.question_id,
        "answer_text": None,
        "error": str(ex),
        "error_type": type(ex).__name__,
        "attempts": getattr(ex, "attempts", []),
    }


def ask_batch(bundles, config: EndpointConfig = None, transport=None, verbose: bool = False, **kwargs) -> list:
    """Client: Ask a Batch"""
    # Validate Arguments
    bundles = list(bundles)
    config = config if config is not None else EndpointConfig()
    if len(bundles) == 0: return []
    seed = kwargs.pop("seed", None)
    cache = kwargs.pop("cache", None)
    if cache is None and config.cache_dir is not None:
        cache = ResponseCache(config.cache_dir)

    # one jitter stream per item keeps retries independent of scheduling
    rngs = [default_rng([seed, i]) if seed is not None else default_rng() for i in range(len(bundles))]

    # Calculate Result
    stime = perf_counter()
    with httpx.Client(transport=transport, timeout=config.timeout) as client:
        def _one(i):
            try:
                return ask(bundles[i], config, client=client, cache=cache, rng=rngs[i], **kwargs)
            except Scene2PromptError as ex:
                get_logger().warning(f"Question '{bundles[i].question_id}' failed: {ex}")
                return _error_record(bundles[i], ex)

        with ThreadPool(min(config.parallelism, len(bundles))) as pool:
            iterator = pool.imap(_one, range(len(bundles)))
            if Imports["tqdm"] and verbose:
                from tqdm import tqdm
                iterator = tqdm(iterator, "[i] Asking", total=len(bundles))
            results = list(iterator)

    failed = sum(1 for r in results if r.get("error"))
    progress(f"Asked {len(results)} questions, {failed} failed, {final_time(stime)}")
    return results


ask_batch.__doc__ = \
"""Ask a Batch

Runs ask over many bundles with at most `parallelism` requests in flight.
Results come back in input order whatever order the answers arrive in. A
failing item is recorded as a dict with answer_text None, error, error_type
and its attempt log; the batch never aborts.

Args:
    bundles (list[PromptBundle]): The prompts
    config (EndpointConfig): Endpoint settings. Default: EndpointConfig()
    transport (httpx.BaseTransport): Injected transport. Default: None
    verbose (bool): tqdm progress bar when available. Default: False

Kwargs:
    seed (int): Seeds the per-item backoff jitter
    sleep (callable): Backoff sleep passed to ask

Returns:
    list[dict]: One ask result or error record per bundle
"""
