# -*- coding: utf-8 -*-
from scene2prompt import PROMPT

from ._bundle import PromptBundle


def estimate_tokens(bundle: PromptBundle, include_system: bool = True, **kwargs) -> int:
    """Prompt: Token Estimate"""
    words = sum(len(s.value.split()) for s in bundle.user_segments if s.kind == "text")
    if include_system:
        words += len(bundle.system_text.split())
    images = len(bundle.segments("image"))
    specials = len(bundle.segments("special"))

    return int(round(words * PROMPT["TOKENS_PER_WORD"])) + images * PROMPT["TOKENS_PER_IMAGE"] + specials


estimate_tokens.__doc__ = \
"""Token Estimate

A rough, informational count of the tokens a bundle costs: about 1.3 tokens
per whitespace word, about 500 visual tokens per image and one token per
special or placeholder token. It is not tokenizer exact.

Calculation:
    round(1.3 * words) + 500 * images + special tokens

Args:
    bundle (PromptBundle): The bundle
    include_system (bool): Count the system text. Default: True

Returns:
    int: The estimate
"""
