# -*- coding: utf-8 -*-
from base64 import b64decode, b64encode
from binascii import Error as Base64Error
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Tuple

from scene2prompt.utils import PromptError


class AblationMode(str, Enum):
    MV = "MV"
    CT = "CT"
    CDT = "CDT"
    CDT_MV = "CDT_MV"
    CDT_MV_HR = "CDT_MV_HR"
    ZS_CDT_MV = "ZS_CDT_MV"

    @classmethod
    def parse(cls, value) -> "AblationMode":
        try:
            return value if isinstance(value, cls) else cls(str(value).upper())
        except ValueError:
            raise PromptError(f"[X] Unknown ablation mode '{value}', expected one of {[m.value for m in cls]}")

    @property
    def images(self) -> bool:
        return self in (AblationMode.MV, AblationMode.CDT_MV, AblationMode.CDT_MV_HR, AblationMode.ZS_CDT_MV)

    @property
    def hierarchical(self) -> bool:
        return self is AblationMode.CDT_MV_HR

    @property
    def scene_text(self) -> Optional[str]:
        """'CT', 'CDT' or None: which description the mode carries."""
        if self is AblationMode.MV: return None
        return "CT" if self is AblationMode.CT else "CDT"

    @property
    def zero_shot(self) -> bool:
        return self is AblationMode.ZS_CDT_MV


@dataclass(frozen=True)
class Segment:
    """kind is 'image' (value: file path or data URI), 'special' (a
    demarcation or placeholder token) or 'text'."""
    kind: str
    value: str


@dataclass(frozen=True)
class PromptBundle:
    system_text: str
    user_segments: Tuple[Segment, ...]
    question: str
    mode: AblationMode
    situation: Optional[str] = None
    scene_id: str = ""
    question_id: str = ""

    @property
    def zero_shot(self) -> bool:
        return self.mode.zero_shot

    def segments(self, kind: str) -> list:
        return [s for s in self.user_segments if s.kind == kind]

    @property
    def image_refs(self) -> list:
        return [s.value for s in self.segments("image")]


def is_data_uri(ref: str) -> bool:
    return ref.startswith("data:")


def png_data_uri(data: bytes) -> str:
    return "data:image/png;base64," + b64encode(data).decode("ascii")


def image_bytes(ref: str) -> int:
    """Decoded size of an image reference in bytes (0 for missing files)."""
    if is_data_uri(ref):
        try:
            return len(b64decode(ref.split(",", 1)[1], validate=True))
        except (Base64Error, IndexError):
            raise PromptError(f"[X] Malformed data URI: {ref[:40]}")
    path = Path(ref)
    return path.stat().st_size if path.exists() else 0


def inline_image(ref: str) -> str:
    """A data URI for a file reference; data URIs pass through."""
    if is_data_uri(ref): return ref
    path = Path(ref)
    if not path.exists():
        raise PromptError(f"[X] Image file not found: {ref}")
    return png_data_uri(path.read_bytes())


def file_url(ref: str) -> str:
    """file:// URL for absolute paths; relative paths and data URIs as given."""
    if is_data_uri(ref): return ref
    path = Path(ref)
    return path.as_uri() if path.is_absolute() else path.as_posix()
