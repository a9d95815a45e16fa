from .context import scene2prompt

from json import dumps
from math import pi
from pathlib import Path

from numpy import column_stack, uint8
from numpy.random import default_rng

from scene2prompt.geometry import box_from_center
from scene2prompt.ingest import save_point_cloud, save_proposals
from scene2prompt.utils import AgentSituation, ObjectProposal, Point3, Scene

VERBOSE = False

ALERT = f"[!]"
INFO = f"[i]"

GOLDEN_DIR = Path(__file__).parent / "golden"

# The desk corner of a bedroom; the monitor is the worked example object.
sample_objects = [
    ("monitor", (-0.19, 1.37, 0.96), (0.5, 0.1, 0.3), 0.93),
    ("tv", (-0.17, 1.37, 0.96), (0.5, 0.1, 0.3), 0.60),
    ("desk", (0.0, 1.5, 0.4), (1.2, 0.6, 0.8), 0.88),
    ("chair", (0.8, 0.2, 0.45), (0.5, 0.5, 0.9), 0.81),
    ("bed", (-1.2, -0.3, 0.3), (1.0, 2.0, 0.6), 0.95),
]

# Agent at the origin facing +y: monitor and desk at 12, chair at 3, bed at 9.
sample_situation = AgentSituation(Point3(0.0, 0.0, 0.0), pi / 2, "I am standing in the middle of the room facing the desk.")


def sample_proposals(objects=None) -> list:
    objects = objects if objects is not None else sample_objects
    return [ObjectProposal(label, box_from_center(c, s), conf) for label, c, s, conf in objects]


def sample_points(n: int = 400, seed: int = 0):
    """Points spread over a 4 x 4 x 2 m room, with colors."""
    rng = default_rng(seed)
    points = column_stack([
        rng.uniform(-2.0, 2.0, n),
        rng.uniform(-1.5, 2.5, n),
        rng.uniform(0.0, 2.0, n),
    ])
    colors = rng.integers(0, 256, size=(n, 3)).astype(uint8)
    return points, colors


def sample_scene(scene_id: str = "scene0000_00", situation=sample_situation, n: int = 400, seed: int = 0) -> Scene:
    points, colors = sample_points(n, seed)
    return Scene(scene_id, points, colors, tuple(sample_proposals()), situation)


def write_scene(root, scene_id: str, situation: bool = True, n: int = 400, seed: int = 0, source: str = "predicted") -> Path:
    """{root}/{scene_id}/ points.ply, proposals.json and situation.json."""
    scene_dir = Path(root) / scene_id
    points, colors = sample_points(n, seed)
    save_point_cloud(scene_dir / "points.ply", points, colors)
    save_proposals(scene_dir / "proposals.json", scene_id, sample_proposals(), source)
    if situation:
        p = sample_situation.position
        (scene_dir / "situation.json").write_text(dumps({
            "position": [p.x, p.y, p.z],
            "yaw": sample_situation.yaw,
            "description": sample_situation.description,
        }), encoding="utf-8")
    return scene_dir


def write_questions(path, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(dumps(r) + "\n" for r in rows), encoding="utf-8")
    return path


def sample_questions(scene_ids=("scene0000_00", "scene0001_00")) -> list:
    rows = []
    for i, sid in enumerate(scene_ids):
        rows.append({"question_id": f"q{2 * i}", "scene_id": sid, "question": "What is on the desk?", "answers": ["monitor"]})
        rows.append({"question_id": f"q{2 * i + 1}", "scene_id": sid, "question": "Is the bed to my left?", "answers": ["yes"]})
    return rows


# (question, references, prediction, em) hand-scored.
# What 3/5, Is 3/4, How 2/3, Can 2/3, Which 1/2, Other 2/3; overall 13/20
scored_records = [
    ("What color is the desk?", ["brown"], "brown", 1),
    ("What is on the table?", ["lamp"], "a lamp", 1),
    ("What is to my left?", ["chair"], "chairs", 0),
    ("What is the shape of the rug?", ["round", "circle"], "Circle.", 1),
    ("what can I sit on?", ["sofa"], "bed", 0),
    ("Is the door open?", ["yes"], "yes", 1),
    ("Is the lamp on?", ["no"], "yes", 0),
    ("Is there a window behind me?", ["yes"], "Yes", 1),
    ("IS the floor wooden?", ["no"], "no", 1),
    ("How many chairs are there?", ["4", "four"], "four", 1),
    ("How many monitors are on the desk?", ["2"], "3", 0),
    ("How is the bed made?", ["neatly"], "neatly", 1),
    ("Can I see the TV from here?", ["yes"], "no", 0),
    ("can I reach the shelf?", ["no"], "no", 1),
    ("Can you walk to the door?", ["yes"], "yes.", 1),
    ("Which direction should I go to reach the sink?", ["left"], "left", 1),
    ("Which chair is closer?", ["the left one"], "right one", 0),
    ("Where is the lamp?", ["on the desk"], "on desk", 1),
    ("Am I facing the window?", ["yes"], "no", 0),
    ("Does the room have a rug?", ["yes"], "yes", 1),
]

scored_by_type = {
    "What": (3, 5), "Is": (3, 4), "How": (2, 3),
    "Can": (2, 3), "Which": (1, 2), "Other": (2, 3),
}

VOCABULARY = [
    "the", "a", "chair", "table", "brown", "white", "lamp", "desk", "on",
    "left", "right", "two", "three", "near", "window", "bed", "red", "cat",
]


def random_sentence(rng, low: int = 1, high: int = 6) -> str:
    return " ".join(rng.choice(VOCABULARY, size=int(rng.integers(low, high + 1))))


def error_analysis(name, kind, msg, icon=INFO, newline=True):
    if VERBOSE:
        s = f"{icon} {name}['{kind}']: {msg}"
        if newline:
            s = f"\n{s}"
        print(s)
