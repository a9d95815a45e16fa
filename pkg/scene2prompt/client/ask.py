# -*- coding: utf-8 -*-
from json import dumps
from time import perf_counter, sleep as time_sleep

import httpx
from numpy.random import default_rng

from scene2prompt import CLIENT
from scene2prompt.prompt import PromptBundle
from scene2prompt.utils import PromptError, TransportError, get_logger

from ._cache import ResponseCache
from ._endpoint import EndpointConfig
from ._protocol import ChatCompletionsProtocol


def backoff_delay(retry: int, rng=None) -> float:
    """Seconds to wait before retry number `retry` (0 based), jittered ±20%."""
    rng = rng if rng is not None else default_rng()
    delay = CLIENT["BACKOFF_BASE"] * CLIENT["BACKOFF_FACTOR"] ** retry
    return delay * rng.uniform(1.0 - CLIENT["JITTER"], 1.0 + CLIENT["JITTER"])


def _headers(config: EndpointConfig) -> dict:
    headers = {"Content-Type": "application/json"}
    if config.api_key:
        headers["Authorization"] = f"Bearer {config.api_key}"
    return headers


def _post(client: httpx.Client, config: EndpointConfig, body: bytes, sleep, rng) -> tuple:
    """Posts body until a 2xx, a 4xx or the retry budget runs out."""
    logger, attempts = get_logger(), []
    total = config.max_retries + 1

    for k in range(total):
        stime = perf_counter()
        entry = {"attempt": k + 1, "status": None, "error": None}
        try:
            response = client.post(config.url, content=body, headers=_headers(config), timeout=config.timeout)
            entry["status"] = response.status_code
        except httpx.TimeoutException as ex:
            entry["error"] = f"timeout: {ex}"
            response = None
        except httpx.TransportError as ex:
            entry["error"] = f"{type(ex).__name__}: {ex}"
            entry["elapsed"] = perf_counter() - stime
            attempts.append(entry)
            raise TransportError(f"[X] Request to {config.url} failed: {ex}", attempts=attempts)
        entry["elapsed"] = perf_counter() - stime
        attempts.append(entry)

        if response is not None:
            if response.is_success:
                return response.content, attempts
            if response.status_code < 500:
                raise TransportError(
                    f"[X] Endpoint answered {response.status_code}: {response.text[:200]}",
                    attempts=attempts, status=response.status_code,
                )

        if k + 1 < total:
            delay = backoff_delay(k, rng)
            entry["delay"] = delay
            logger.warning(f"Attempt {k + 1}/{total} failed ({entry['error'] or entry['status']}), retrying in {delay:.2f}s")
            sleep(delay)

    last = attempts[-1]
    raise TransportError(
        f"[X] Gave up on {config.url} after {len(attempts)} attempts",
        attempts=attempts, status=last["status"],
    )


def ask(bundle: PromptBundle, config: EndpointConfig = None, transport=None, **kwargs) -> dict:
    """Client: Ask the VLM Endpoint"""
    # Validate Arguments
    if not isinstance(bundle, PromptBundle):
        raise PromptError(f"[X] ask expects a PromptBundle, got {type(bundle).__name__}")
    config = config if config is not None else EndpointConfig()
    protocol = kwargs.pop("protocol", None) or ChatCompletionsProtocol()
    sleep = kwargs.pop("sleep", time_sleep)
    rng = kwargs.pop("rng", None)
    client = kwargs.pop("client", None)
    cache = kwargs.pop("cache", None)
    if cache is None and config.cache_dir is not None:
        cache = ResponseCache(config.cache_dir)

    body = protocol.encode(bundle, config)
    model = config.zero_shot_model if bundle.zero_shot else config.model

    # Cached
    if cache is not None and config.use_cache:
        cached = cache.get(body)
        if cached is not None:
            answer, raw = protocol.decode(dumps(cached).encode("utf-8"))
            return {
                "question_id": bundle.question_id, "answer_text": answer, "latency": 0.0,
                "raw_response": raw, "attempts": [], "model": model, "cached": True,
            }

    # Calculate Result
    stime = perf_counter()
    if client is None:
        with httpx.Client(transport=transport, timeout=config.timeout) as client:
            content, attempts = _post(client, config, body, sleep, rng)
    else:
        content, attempts = _post(client, config, body, sleep, rng)
    latency = perf_counter() - stime

    answer, raw = protocol.decode(content)
    if cache is not None:
        cache.put(body, raw)

    return {
        "question_id": bundle.question_id, "answer_text": answer, "latency": latency,
        "raw_response": raw, "attempts": attempts, "model": model, "cached": False,
    }


ask.__doc__ = \
"""Ask the VLM Endpoint

Posts one bundle as a chat-completions request to {base_url}/chat/completions
with bearer authentication and returns the first assistant message, trimmed.
5xx answers and timeouts are retried with exponential backoff (1 s, then x2,
each delay jittered by ±20%); 4xx answers fail at once. Every attempt sends
the same request bytes. Responses are cached by the sha256 of the request
body when a cache directory is configured.

Args:
    bundle (PromptBundle): The prompt
    config (EndpointConfig): Endpoint settings. Default: EndpointConfig()
    transport (httpx.BaseTransport): Injected transport, e.g.
        httpx.MockTransport. Default: None (network)

Kwargs:
    protocol (ChatProtocol): Wire adapter. Default: ChatCompletionsProtocol
    sleep (callable): Backoff sleep. Default: time.sleep
    rng (numpy.random.Generator): Jitter source
    client (httpx.Client): Shared client
    cache (ResponseCache): Overrides config.cache_dir

Returns:
    dict: question_id, answer_text, latency, raw_response, attempts (one
        dict per attempt: attempt, status, error, elapsed, delay), model
        and cached

Raises:
    TransportError: exhausted retries or a 4xx; carries the attempt log
    ProtocolError: a body without choices[0].message.content
"""
