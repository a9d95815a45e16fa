# -*- coding: utf-8 -*-
from dataclasses import dataclass, field
from os import environ
from typing import Optional

from httpx import URL, InvalidURL

from scene2prompt import CLIENT, PROMPT
from scene2prompt.utils import ConfigError


def _api_key() -> str:
    return environ.get(CLIENT["API_KEY_ENV"], "")


@dataclass
class EndpointConfig:
    """Chat-completions endpoint settings.

    base_url (str): e.g. 'http://localhost:8000/v1'; requests go to
        {base_url}/chat/completions
    api_key (str): Bearer token, read from SCENE2PROMPT_API_KEY
    timeout (float): Seconds per attempt. Default: 60
    max_retries (int): Retries after the first attempt. Default: 3
    parallelism (int): Requests in flight in ask_batch. Default: 4
    model, zero_shot_model (str): Finetuned and untuned model names
    cache_dir (str): Response cache root. Default: None (no cache)
    use_cache (bool): False bypasses the cache. Default: True
    inline_images (bool): Send images as base64 data URIs. Default: True
    """
    base_url: str = "http://localhost:8000/v1"
    api_key: str = field(default_factory=_api_key, repr=False)
    timeout: float = CLIENT["TIMEOUT"]
    max_retries: int = CLIENT["MAX_RETRIES"]
    parallelism: int = CLIENT["PARALLELISM"]
    model: str = CLIENT["MODEL"]
    zero_shot_model: str = CLIENT["ZERO_SHOT_MODEL"]
    temperature: float = 0.0
    max_tokens: int = PROMPT["MAX_ANSWER_TOKENS"]
    cache_dir: Optional[str] = None
    use_cache: bool = True
    inline_images: bool = True
    max_image_bytes: int = 20 * 1024 * 1024

    def __post_init__(self):
        try:
            url = URL(str(self.base_url))
        except InvalidURL as ex:
            raise ConfigError(f"[X] Invalid base_url '{self.base_url}': {ex}")
        if url.scheme not in ("http", "https") or not url.host:
            raise ConfigError(f"[X] base_url must be an http(s) URL, got '{self.base_url}'")
        self.base_url = str(self.base_url).rstrip("/")

        if int(self.max_retries) < 0:
            raise ConfigError(f"[X] max_retries must be >= 0, got {self.max_retries}")
        if int(self.parallelism) < 1:
            raise ConfigError(f"[X] parallelism must be >= 1, got {self.parallelism}")
        if float(self.timeout) <= 0:
            raise ConfigError(f"[X] timeout must be positive, got {self.timeout}")
        self.max_retries, self.parallelism = int(self.max_retries), int(self.parallelism)
        self.timeout = float(self.timeout)

    @property
    def url(self) -> str:
        return f"{self.base_url}/chat/completions"
