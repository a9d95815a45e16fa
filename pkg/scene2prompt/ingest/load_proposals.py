# -*- coding: utf-8 -*-
from json import JSONDecodeError, dumps, loads
from math import isfinite
from pathlib import Path

from scene2prompt.utils import Aabb3, IngestError, ObjectProposal, Point3, get_logger, read_input_text, write_if_changed


SOURCES = ("predicted", "gt")


def normalize_label(label) -> str:
    """Lowercase and trim; internal spaces are kept."""
    return str(label).strip().lower()


def _triple(value, key: str, index: int, path):
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise IngestError(f"proposal {index}: '{key}' must be a list of 3 numbers", path)
    try:
        triple = [float(v) for v in value]
    except (TypeError, ValueError):
        raise IngestError(f"proposal {index}: '{key}' must be a list of 3 numbers", path)
    if not all(isfinite(v) for v in triple):
        raise IngestError(f"proposal {index}: '{key}' has non-finite values", path)
    return triple


def read_proposal_file(path) -> dict:
    """Parsed and validated ProposalFile: scene_id, source and proposals."""
    path = Path(path)
    text = read_input_text(path, "Proposal file")
    try:
        data = loads(text)
    except JSONDecodeError as ex:
        raise IngestError(f"Malformed proposal JSON: {ex.msg}", path, len(text[:ex.pos].encode("utf-8")))

    if not isinstance(data, dict) or not isinstance(data.get("proposals"), list):
        raise IngestError("Proposal file needs an object with a 'proposals' list", path)
    source = data.get("source", "predicted")
    if source not in SOURCES:
        raise IngestError(f"Unknown proposal source '{source}', expected one of {SOURCES}", path)

    proposals = []
    for i, entry in enumerate(data["proposals"]):
        if not isinstance(entry, dict):
            raise IngestError(f"proposal {i}: expected an object", path)
        label = normalize_label(entry.get("label", ""))
        if len(label) == 0:
            raise IngestError(f"proposal {i}: empty label", path)
        lo = _triple(entry.get("box_min"), "box_min", i, path)
        hi = _triple(entry.get("box_max"), "box_max", i, path)
        for axis, a, b in zip("xyz", lo, hi):
            if a > b:
                raise IngestError(f"proposal {i} ({label}): box_min.{axis} > box_max.{axis} ({a} > {b})", path)
        confidence = entry.get("confidence", 1.0)
        try:
            confidence = float(confidence)
        except (TypeError, ValueError):
            raise IngestError(f"proposal {i} ({label}): confidence must be a number", path)
        if not (0.0 <= confidence <= 1.0):
            raise IngestError(f"proposal {i} ({label}): confidence {confidence} outside [0, 1]", path)
        proposals.append(ObjectProposal(label, Aabb3(Point3(*lo), Point3(*hi)), confidence))

    return {"scene_id": str(data.get("scene_id", "")), "source": source, "proposals": proposals}


def load_proposals(path, min_confidence: float = 0.0, **kwargs) -> list:
    """Ingest: Object Proposals"""
    # Validate Arguments
    min_confidence = float(min_confidence)
    if not (0.0 <= min_confidence <= 1.0):
        raise IngestError(f"min_confidence {min_confidence} outside [0, 1]", path)

    # Calculate Result
    proposals = read_proposal_file(path)["proposals"]
    if min_confidence > 0:
        kept = [p for p in proposals if p.confidence >= min_confidence]
        get_logger().debug(f"{Path(path).name}: {len(kept)}/{len(proposals)} proposals at confidence >= {min_confidence}")
        return kept
    return proposals


def save_proposals(path, scene_id: str, proposals, source: str = "predicted") -> bool:
    """Writes proposals in the ProposalFile layout. Returns True if written."""
    if source not in SOURCES:
        raise IngestError(f"Unknown proposal source '{source}', expected one of {SOURCES}", path)
    data = {
        "scene_id": scene_id,
        "source": source,
        "proposals": [
            {
                "label": p.class_label,
                "box_min": list(p.box.min.as_tuple()),
                "box_max": list(p.box.max.as_tuple()),
                "confidence": p.confidence,
            } for p in proposals
        ],
    }
    return write_if_changed(path, dumps(data, indent=2, sort_keys=True) + "\n")


load_proposals.__doc__ = \
"""Object Proposals

Loads the object proposals exported by an instance segmenter from a JSON
ProposalFile. Every proposal is validated: labels are lowercased and trimmed
(internal spaces kept), boxes need min <= max on every axis, confidences lie
in [0, 1] and default to 1.0 when absent. Nothing is dropped silently; an
optional confidence gate is the only filter and it is off by default.

File layout:
    {"scene_id": "scene0000_00", "source": "predicted",
     "proposals": [{"label": "monitor", "box_min": [x, y, z],
                    "box_max": [x, y, z], "confidence": 0.93}, ...]}

    "source" is "predicted" (default) or "gt" for ground-truth segmentations.

Args:
    path (str | Path): The proposals .json file
    min_confidence (float): Keep proposals at or above it. Default: 0.0

Returns:
    list: ObjectProposal in file order

Raises:
    IngestError: malformed JSON (with byte offset), empty label, inverted
        box (naming the axis) or confidence outside [0, 1]
"""
