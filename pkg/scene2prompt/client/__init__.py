# -*- coding: utf-8 -*-
from ._cache import ResponseCache
from ._endpoint import EndpointConfig
from ._protocol import ChatCompletionsProtocol, ChatProtocol
from .ask import ask, backoff_delay
from .ask_batch import ask_batch
