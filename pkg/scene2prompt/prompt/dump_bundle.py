# -*- coding: utf-8 -*-
from json import JSONDecodeError, dumps, loads

from scene2prompt.utils import PromptError

from ._bundle import AblationMode, PromptBundle, Segment, inline_image


IMAGE_MODES = ("file", "base64")


def dump_bundle(bundle: PromptBundle, image_mode: str = "file") -> str:
    """JSON text of a bundle, images as file references or inline base64."""
    if image_mode not in IMAGE_MODES:
        raise PromptError(f"[X] image_mode must be one of {IMAGE_MODES}, got '{image_mode}'")
    segments = []
    for s in bundle.user_segments:
        value = inline_image(s.value) if s.kind == "image" and image_mode == "base64" else s.value
        segments.append({"kind": s.kind, "value": value})
    data = {
        "scene_id": bundle.scene_id,
        "question_id": bundle.question_id,
        "mode": bundle.mode.value,
        "zero_shot": bundle.zero_shot,
        "system_text": bundle.system_text,
        "situation": bundle.situation,
        "question": bundle.question,
        "user_segments": segments,
    }
    return dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_bundle(text: str) -> PromptBundle:
    """Inverse of dump_bundle."""
    try:
        data = loads(text)
        return PromptBundle(
            system_text=data["system_text"],
            user_segments=tuple(Segment(s["kind"], s["value"]) for s in data["user_segments"]),
            question=data["question"],
            mode=AblationMode.parse(data["mode"]),
            situation=data.get("situation"),
            scene_id=data.get("scene_id", ""),
            question_id=data.get("question_id", ""),
        )
    except (JSONDecodeError, KeyError, TypeError) as ex:
        raise PromptError(f"[X] Malformed bundle: {ex}")
