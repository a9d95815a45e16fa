# -*- coding: utf-8 -*-
from pathlib import Path

from scene2prompt.utils import IngestError, Scene, get_logger

from .load_point_cloud import load_point_cloud
from .load_proposals import read_proposal_file
from .load_situation import load_situation


def load_scene(scene_dir, scene_id: str, min_confidence: float = 0.0, **kwargs) -> Scene:
    """Loads {scene_dir}/{scene_id}/ points.ply, proposals.json and the
    optional situation.json into a Scene.

    kwargs:
        situation (dict | AgentSituation): Overrides situation.json
        proposals (str | Path): Proposal file in place of proposals.json
    """
    root = Path(scene_dir) / scene_id
    if not root.is_dir():
        raise IngestError(f"Scene directory for '{scene_id}' not found", root)

    points, colors = load_point_cloud(root / "points.ply")
    meta = read_proposal_file(kwargs.pop("proposals", None) or root / "proposals.json")
    if meta["scene_id"] and meta["scene_id"] != scene_id:
        get_logger().warning(f"{scene_id}: proposals.json names scene '{meta['scene_id']}'")
    proposals = [p for p in meta["proposals"] if p.confidence >= min_confidence]

    situation = kwargs.pop("situation", None)
    if isinstance(situation, dict):
        situation = load_situation(situation)
    elif situation is None and (root / "situation.json").exists():
        situation = load_situation(root / "situation.json")

    get_logger().debug(f"{scene_id}: {points.shape[0]} points, {len(proposals)} {meta['source']} proposals")
    return Scene(scene_id, points, colors, tuple(proposals), situation)


def proposal_source(scene_dir, scene_id: str) -> str:
    """'gt' or 'predicted' as declared by the scene's proposals.json."""
    return read_proposal_file(Path(scene_dir) / scene_id / "proposals.json")["source"]
