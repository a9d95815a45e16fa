# -*- coding: utf-8 -*-
from ._bundle import AblationMode, PromptBundle, Segment
from .assemble_prompt import assemble_prompt
from .dump_bundle import dump_bundle, load_bundle
from .estimate_tokens import estimate_tokens
from .render_chat_request import render_chat_request, request_body
