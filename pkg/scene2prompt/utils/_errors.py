# -*- coding: utf-8 -*-
from typing import List, Optional


class Scene2PromptError(Exception):
    """Base class of every error raised by scene2prompt."""


class GeometryError(Scene2PromptError):
    pass


class IngestError(Scene2PromptError):
    """Malformed input file. Carries the offending path and byte offset."""

    def __init__(self, message: str, path=None, offset: Optional[int] = None):
        where = []
        if path is not None: where.append(f"{path}")
        if offset is not None: where.append(f"byte {offset}")
        suffix = f" ({', '.join(where)})" if len(where) else ""
        super().__init__(f"[X] {message}{suffix}")
        self.path = path
        self.offset = offset


class PruneError(Scene2PromptError):
    pass


class DescriptionError(Scene2PromptError):
    pass


class RenderError(Scene2PromptError):
    pass


class HierarchyError(Scene2PromptError):
    """Dimension mismatch, unknown token id or a diverged training run."""

    def __init__(self, message: str, step: Optional[int] = None):
        super().__init__(message)
        self.step = step


class PromptError(Scene2PromptError):
    pass


class TransportError(Scene2PromptError):
    """Retries exhausted or a non-retryable HTTP status."""

    def __init__(self, message: str, attempts: List[dict] = None, status: Optional[int] = None):
        super().__init__(message)
        self.attempts = attempts if attempts is not None else []
        self.status = status


class ProtocolError(Scene2PromptError):
    pass


class ConfigError(Scene2PromptError):
    pass


class EvaluationError(Scene2PromptError):
    pass
