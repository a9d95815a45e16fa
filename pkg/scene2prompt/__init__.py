name = "scene2prompt"
"""
.. moduleauthor:: scene2prompt developers
"""
from importlib.util import find_spec
from math import pi

try:
    from importlib.metadata import version as _dist_version, PackageNotFoundError
    __version__ = _dist_version("scene2prompt")
except PackageNotFoundError:
    __version__ = "0.1.0"

version = __version__

Imports = {
    "numba": find_spec("numba") is not None,
    "tqdm": find_spec("tqdm") is not None,
    "yaml": find_spec("yaml") is not None,
}

# Not ideal and not dynamic but it works.
Category = {
    # Geometry
    "geometry": [
        "aabb_iou", "bbox_center", "box_from_center", "quaternion_from_yaw",
        "scene_bounds", "yaw_from_quaternion"
    ],
    # Ingest
    "ingest": [
        "load_patch_features", "load_point_cloud", "load_proposals",
        "load_questions", "load_scene", "load_situation",
        "save_patch_features", "save_point_cloud", "save_proposals"
    ],
    # Pruning
    "pruning": ["majority_relabel", "nms_prune", "prune_proposals"],
    # Describe
    "describe": [
        "clock_hour", "coordinate_description", "directional_description",
        "parse_description", "situated_description"
    ],
    # Render
    "render": [
        "plan_cameras", "project_point", "render_scene", "render_view",
        "save_views"
    ],
    # Hierarchical visual representation
    "hiervis": [
        "assemble_hierarchy", "backward", "cross_attention_block",
        "gradient_check", "hierarchy_forward", "init_model", "load_checkpoint",
        "patchify_stub", "save_checkpoint", "scene_token", "toy_decoder_loss",
        "train_toy", "view_tokens"
    ],
    # Prompt
    "prompt": [
        "assemble_prompt", "dump_bundle", "estimate_tokens",
        "render_chat_request"
    ],
    # Client
    "client": ["ask", "ask_batch"],
    # Evaluate
    "evaluate": [
        "bleu", "cider_d", "em_at_1", "evaluate_run", "load_records",
        "meteor_lite", "normalize_answer", "question_type", "rouge_l"
    ],
}

VIEW_IDS = ("bev", "front", "left", "right", "back")

RENDER = {
    "WIDTH": 448,
    "HEIGHT": 448,
    "SPLAT_RADIUS": 2,
    "BACKGROUND": (255, 255, 255),
    "DEFAULT_RGB": (128, 128, 128),
    "BEV_MARGIN": 1.05,          # ortho_extent = max footprint * margin
    "OBLIQUE_DISTANCE": 1.2,     # * AABB diagonal
    "OBLIQUE_ELEVATION": 45.0,   # degrees
    "OBLIQUE_VFOV": 60.0,        # degrees
    "NEAR": 1e-6,
}

# Cardinal offsets of the oblique cameras in the xy-plane, z-up world.
CARDINALS = {
    "front": (0.0, -1.0),
    "back": (0.0, 1.0),
    "left": (-1.0, 0.0),
    "right": (1.0, 0.0),
}

HIERARCHY = {
    "DIM": 64,
    "HEADS": 4,
    "FFN_MULT": 4,
    "VIEWS": 5,
    "GRID": 14,
    "LN_EPS": 1e-5,
    "MAX_ANSWER": 16,
}

TOKENS = {
    "VISION_START": "<|vision_start|>",
    "VISION_END": "<|vision_end|>",
    "VIEW_START": "<|view_start|>",
    "VIEW_END": "<|view_end|>",
    "SCENE_START": "<|scene_start|>",
    "SCENE_END": "<|scene_end|>",
    "VIEW": "<view>",
    "SCENE": "<scene>",
    "IMAGE": "<image>",
    "BOS": "<bos>",
    "UNK": "<unk>",
}

CLOCK = {
    "HOURS": 12,
    "SECTOR": pi / 6,            # 30 degrees
    "HALF_SECTOR": pi / 12,      # 15 degrees
    "MIN_DISTANCE": 1e-9,
}

PROMPT = {
    # Reproduced verbatim, grammar included.
    "SYSTEM": (
        "You are a assistant that can understand a scene, you will be provided"
        " with images of top-down views of the scene,view representations and"
        " scene representation, a situation and coordinates[x,y,z] of objects"
        " of the scene. Answer the question using a single word or phrase"
    ),
    "TOKENS_PER_IMAGE": 500,
    "TOKENS_PER_WORD": 1.3,
    "MAX_ANSWER_TOKENS": 16,
}

CLIENT = {
    "TIMEOUT": 60.0,
    "MAX_RETRIES": 3,
    "PARALLELISM": 4,
    "BACKOFF_BASE": 1.0,
    "BACKOFF_FACTOR": 2.0,
    "JITTER": 0.2,
    "API_KEY_ENV": "SCENE2PROMPT_API_KEY",
    "MODEL": "qwen2.5-vl-7b-instruct-3d",
    "ZERO_SHOT_MODEL": "qwen2.5-vl-7b-instruct",
}

from scene2prompt.utils import *
from scene2prompt.geometry import *
from scene2prompt.ingest import *
from scene2prompt.pruning import *
from scene2prompt.describe import *
from scene2prompt.render import *
from scene2prompt.hiervis import *
from scene2prompt.prompt import *
from scene2prompt.client import *
from scene2prompt.evaluate import *
from scene2prompt.core import *
