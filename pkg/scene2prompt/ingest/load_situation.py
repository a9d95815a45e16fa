# -*- coding: utf-8 -*-
from json import JSONDecodeError, loads
from pathlib import Path

from scene2prompt.geometry import yaw_from_quaternion
from scene2prompt.utils import AgentSituation, GeometryError, IngestError, Point3, read_input_text


def load_situation(source, **kwargs) -> AgentSituation:
    """Ingest: Agent Situation"""
    path = None
    if isinstance(source, (str, Path)):
        path = Path(source)
        text = read_input_text(path, "Situation file")
        try:
            source = loads(text)
        except JSONDecodeError as ex:
            raise IngestError(f"Malformed situation JSON: {ex.msg}", path, len(text[:ex.pos].encode("utf-8")))
    if not isinstance(source, dict):
        raise IngestError("Situation must be a JSON object", path)

    try:
        position = Point3.of(source["position"])
    except (KeyError, TypeError, ValueError, GeometryError):
        raise IngestError("Situation needs a finite 'position' [x, y, z]", path)

    try:
        if "yaw" in source:
            yaw = float(source["yaw"])
        elif "rotation" in source:
            yaw = yaw_from_quaternion(source["rotation"])
        else:
            raise IngestError("Situation needs 'yaw' (radians) or 'rotation' (quaternion wxyz)", path)
    except GeometryError as ex:
        raise IngestError(f"Invalid situation rotation: {ex}", path)
    except (TypeError, ValueError):
        raise IngestError("Situation 'yaw' must be a number", path)

    description = source.get("description", source.get("situation", ""))
    try:
        return AgentSituation(position, yaw, str(description or ""))
    except GeometryError as ex:
        raise IngestError(str(ex), path)


load_situation.__doc__ = \
"""Agent Situation

Builds an AgentSituation from a JSON file or an already parsed mapping. The
heading is given either directly as 'yaw' (radians, counterclockwise from +x)
or as a 'rotation' quaternion (w, x, y, z) whose yaw is extracted. The free
text situation is read from 'description' (or 'situation').

File layout:
    {"position": [x, y, z], "yaw": 1.5708,
     "description": "I am sitting on the bed facing the desk."}

Args:
    source (str | Path | dict): A situation .json file or mapping

Returns:
    AgentSituation: yaw normalized to [0, 2pi)
"""
