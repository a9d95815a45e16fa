# -*- coding: utf-8 -*-
from json import JSONDecodeError, loads

from scene2prompt.prompt import PromptBundle, render_chat_request
from scene2prompt.utils import ProtocolError


class ChatProtocol:
    """Wire adapter: how a bundle becomes a request and a reply an answer."""
    path = ""

    def encode(self, bundle: PromptBundle, config) -> bytes:
        raise NotImplementedError

    def decode(self, body: bytes) -> tuple:
        """Returns (answer_text, parsed response)."""
        raise NotImplementedError


class ChatCompletionsProtocol(ChatProtocol):
    """The chat-completions convention: answer in choices[0].message.content."""
    path = "/chat/completions"

    def encode(self, bundle: PromptBundle, config) -> bytes:
        return render_chat_request(bundle, config).encode("utf-8")

    def decode(self, body: bytes) -> tuple:
        try:
            response = loads(body)
        except (JSONDecodeError, UnicodeDecodeError) as ex:
            raise ProtocolError(f"[X] Response is not JSON: {ex}")

        try:
            content = response["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError):
            raise ProtocolError("[X] Response has no choices[0].message.content")

        # some servers return content parts
        if isinstance(content, list):
            content = "".join(p.get("text", "") for p in content if isinstance(p, dict))
        if not isinstance(content, str):
            raise ProtocolError(f"[X] Message content must be text, got {type(content).__name__}")

        return content.strip(), response
