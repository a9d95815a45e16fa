# -*- coding: utf-8 -*-
from json import dumps

from scene2prompt import CLIENT, PROMPT, TOKENS
from scene2prompt.utils import PromptError

from ._bundle import PromptBundle, file_url, image_bytes, inline_image

# The endpoint's chat template adds these around every image itself.
TEMPLATE_TOKENS = (TOKENS["VISION_START"], TOKENS["VISION_END"])
MAX_IMAGE_BYTES = 20 * 1024 * 1024


def request_body(bundle: PromptBundle, endpoint_config=None) -> dict:
    """The chat-completions request as a dict."""
    setting = lambda name, default: getattr(endpoint_config, name, default) if endpoint_config is not None else default
    inline = setting("inline_images", True)
    limit = setting("max_image_bytes", MAX_IMAGE_BYTES)
    model = setting("zero_shot_model", CLIENT["ZERO_SHOT_MODEL"]) if bundle.zero_shot else setting("model", CLIENT["MODEL"])

    images, markers, lines = [], [], []
    for segment in bundle.user_segments:
        if segment.kind == "image":
            ref = inline_image(segment.value) if inline else file_url(segment.value)
            size = image_bytes(ref) if inline else image_bytes(segment.value)
            if size > limit:
                raise PromptError(f"[X] Image payload of {size} bytes exceeds the {limit} byte limit")
            images.append({"type": "image_url", "image_url": {"url": ref}})
        elif segment.kind == "special":
            if segment.value not in TEMPLATE_TOKENS:
                markers.append(segment.value)
        else:
            lines.append(segment.value)

    # placeholder markers stay on one line ahead of the text
    text = "\n".join(([" ".join(markers)] if markers else []) + lines)

    if len(images):
        content = images + [{"type": "text", "text": text}]
    else:
        content = text

    return {
        "model": model,
        "messages": [
            {"role": "system", "content": bundle.system_text},
            {"role": "user", "content": content},
        ],
        "temperature": setting("temperature", 0),
        "max_tokens": setting("max_tokens", PROMPT["MAX_ANSWER_TOKENS"]),
    }


def render_chat_request(bundle: PromptBundle, endpoint_config=None, **kwargs) -> str:
    """Prompt: Chat Request Body"""
    return dumps(request_body(bundle, endpoint_config), sort_keys=True, ensure_ascii=False, separators=(",", ":"))


render_chat_request.__doc__ = \
"""Chat Request Body

Serializes a bundle as a chat-completions request: a system message with the
instruction and a user message whose content is the image parts followed by
one text part. Text-only bundles send the user content as a plain string.
Vision region tokens are dropped because the endpoint's chat template wraps
each image itself; hierarchical placeholders travel as text markers on the
first line. Keys are sorted so equal bundles give identical bytes.

Request:
    {"max_tokens": 16, "messages": [
        {"content": "<system>", "role": "system"},
        {"content": [{"image_url": {"url": ..}, "type": "image_url"}, ..,
                     {"text": "..", "type": "text"}], "role": "user"}],
     "model": "..", "temperature": 0}

Args:
    bundle (PromptBundle): The bundle
    endpoint_config (EndpointConfig): model, zero_shot_model, temperature,
        max_tokens, inline_images (base64 data URIs, default True) and
        max_image_bytes. Default: package defaults

Returns:
    str: The JSON body

Raises:
    PromptError: an image larger than max_image_bytes or a missing file
"""
