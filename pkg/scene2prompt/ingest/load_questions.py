# -*- coding: utf-8 -*-
from json import JSONDecodeError, loads
from pathlib import Path

from scene2prompt.utils import IngestError, read_input


REQUIRED = ("question_id", "scene_id", "question")


def load_questions(path, **kwargs) -> list:
    """Ingest: Questions (JSONL)"""
    path = Path(path)
    data = read_input(path, "Questions file")

    questions, seen, offset = [], set(), 0
    for lineno, raw in enumerate(data.split(b"\n"), start=1):
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError as ex:
            raise IngestError(f"line {lineno}: not valid UTF-8", path, offset + ex.start)
        if len(line.strip()):
            try:
                entry = loads(line)
            except JSONDecodeError as ex:
                raise IngestError(f"line {lineno}: malformed JSON ({ex.msg})", path, offset + len(line[:ex.pos].encode("utf-8")))
            if not isinstance(entry, dict):
                raise IngestError(f"line {lineno}: expected a JSON object", path, offset)
            missing = [k for k in REQUIRED if not entry.get(k)]
            if missing:
                raise IngestError(f"line {lineno}: missing {', '.join(missing)}", path, offset)

            answers = entry.get("answers", [])
            if isinstance(answers, str): answers = [answers]
            qid = str(entry["question_id"])
            if qid in seen:
                raise IngestError(f"line {lineno}: duplicate question_id '{qid}'", path, offset)
            seen.add(qid)

            questions.append({
                "question_id": qid,
                "scene_id": str(entry["scene_id"]),
                "question": str(entry["question"]).strip(),
                "answers": [str(a) for a in answers],
                "situation": entry.get("situation"),
            })
        offset += len(raw) + 1

    return questions


load_questions.__doc__ = \
"""Questions (JSONL)

Reads questions converted from SQA3D or ScanQA, one JSON object per line.
'answers' may be absent for unanswered runs. 'situation' is either free text
(setting a, text-only) or an object with position, yaw/rotation and
description (setting b) that overrides the scene's situation.json.

Line layout:
    {"question_id": "q0", "scene_id": "scene0000_00",
     "question": "What color is the desk?", "answers": ["brown"],
     "situation": "I am facing the window."}

Args:
    path (str | Path): The .jsonl file

Returns:
    list: dicts with question_id, scene_id, question, answers, situation
"""
