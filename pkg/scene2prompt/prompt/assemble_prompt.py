# -*- coding: utf-8 -*-
from pathlib import Path

from scene2prompt import PROMPT, TOKENS, VIEW_IDS
from scene2prompt.render import encode_png
from scene2prompt.utils import PromptError

from ._bundle import AblationMode, PromptBundle, Segment, png_data_uri


def _description_text(descriptions, kind: str):
    """Text of the CT or CDT description from a mapping, SceneDescription or str."""
    if descriptions is None: return None
    if isinstance(descriptions, dict):
        value = descriptions.get(kind)
    elif hasattr(descriptions, "mode"):
        value = descriptions if descriptions.mode == kind else None
    else:
        value = descriptions
    if value is None: return None
    return value.text if hasattr(value, "text") else str(value)


def _image_ref(view) -> str:
    if isinstance(view, (str, Path)):
        return str(view)
    # an in-memory RenderedView
    return png_data_uri(encode_png(view))


def assemble_prompt(scene, question: str, mode, descriptions=None, views=None, situation: str = None, figure_compat: bool = False, **kwargs) -> PromptBundle:
    """Prompt: Assemble Prompt Bundle"""
    # Validate Arguments
    mode = AblationMode.parse(mode)
    question = str(question or "").strip()
    if len(question) == 0:
        raise PromptError("[X] assemble_prompt needs a nonempty question")
    if situation is None and scene is not None and scene.situation is not None:
        situation = scene.situation.description
    situation = str(situation).strip() if situation else None

    scene_text = None
    if mode.scene_text is not None:
        scene_text = _description_text(descriptions, mode.scene_text)
        if scene_text is None:
            need = "a situation with position and yaw" if mode.scene_text == "CDT" else "a coordinate description"
            raise PromptError(f"[X] Mode {mode.value} needs a {mode.scene_text} description ({need})")

    refs = []
    if mode.images:
        refs = [_image_ref(v) for v in (views or [])]
        if len(refs) != len(VIEW_IDS):
            raise PromptError(f"[X] Mode {mode.value} needs {len(VIEW_IDS)} views, got {len(refs)}")

    # Calculate Result
    segments = []
    if mode.images:
        segments.append(Segment("special", TOKENS["VISION_START"]))
        segments += [Segment("image", ref) for ref in refs]
        if mode.hierarchical:
            placeholders = 4 if figure_compat else len(VIEW_IDS)
            segments.append(Segment("special", TOKENS["VIEW_START"]))
            segments += [Segment("special", TOKENS["VIEW"])] * placeholders
            segments.append(Segment("special", TOKENS["VIEW_END"]))
            segments += [
                Segment("special", TOKENS["SCENE_START"]),
                Segment("special", TOKENS["SCENE"]),
                Segment("special", TOKENS["SCENE_END"]),
            ]
        segments.append(Segment("special", TOKENS["VISION_END"]))
    if situation:
        segments.append(Segment("text", f"Situation: {situation}"))
    if scene_text is not None:
        segments.append(Segment("text", scene_text))
    segments.append(Segment("text", f"Question: {question}"))

    return PromptBundle(
        system_text=kwargs.pop("system_text", PROMPT["SYSTEM"]),
        user_segments=tuple(segments),
        question=question,
        mode=mode,
        situation=situation,
        scene_id=scene.scene_id if scene is not None else kwargs.pop("scene_id", ""),
        question_id=str(kwargs.pop("question_id", "")),
    )


assemble_prompt.__doc__ = \
"""Assemble Prompt Bundle

Lays out one (scene, situation, question) prompt for an ablation mode. The
user message follows the template order: the rendered views, the view and
scene placeholders, the situation line, the object description and the
question line. The visual region is wrapped in <|vision_start|> ..
<|vision_end|>; the hierarchical placeholders in <|view_start|> ..
<|view_end|> and <|scene_start|> .. <|scene_end|>. The system text is the
template's instruction, wording kept as published.

Modes:
    mode       images  placeholders  scene text
    MV         5       -             -
    CT         -       -             CT
    CDT        -       -             CDT
    CDT_MV     5       -             CDT
    CDT_MV_HR  5       5 + 1         CDT
    ZS_CDT_MV  5       -             CDT (zero-shot base model)

    The situation line is present whenever situation text exists.

Args:
    scene (Scene): The scene (its situation text is the default situation)
    question (str): The question
    mode (str | AblationMode): The ablation mode
    descriptions (dict | SceneDescription | str): {'CT': .., 'CDT': ..}
    views (list): 5 PNG paths or RenderedView, order bev, front, left,
        right, back
    situation (str): Overrides the scene's situation text
    figure_compat (bool): Emit 4 view placeholders as drawn in the
        template figure. Default: False

Kwargs:
    question_id (str): Carried into the bundle
    system_text (str): Overrides the system instruction

Returns:
    PromptBundle

Raises:
    PromptError: inputs missing for the mode, e.g. CDT without a situation
"""
