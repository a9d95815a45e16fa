# -*- coding: utf-8 -*-
from dataclasses import asdict, dataclass, field, fields, replace
from json import dumps
from multiprocessing import Pool, cpu_count
from pathlib import Path
from time import perf_counter
from typing import List, Optional

from numpy import stack, vstack

from scene2prompt import Imports
from scene2prompt.client import EndpointConfig, ask_batch
from scene2prompt.describe import DescriptionConfig, coordinate_description, situated_description
from scene2prompt.evaluate import QaRecord, evaluate_run
from scene2prompt.hiervis import HierarchyConfig, hierarchy_forward, init_model, patchify_stub
from scene2prompt.ingest import (
    load_patch_features, load_questions, load_scene, load_situation,
    read_proposal_file, save_patch_features, save_proposals
)
from scene2prompt.prompt import AblationMode, assemble_prompt, dump_bundle
from scene2prompt.pruning import PruneConfig, prune_proposals
from scene2prompt.render import RenderConfig, render_scene, save_views
from scene2prompt.utils import (
    ConfigError, Scene, Scene2PromptError,
    final_time, get_logger, progress, write_if_changed
)

IMAGE_MODES = ("file", "base64")
SECTIONS = {
    "prune": PruneConfig,
    "describe": DescriptionConfig,
    "render": RenderConfig,
    "hierarchy": HierarchyConfig,
    "endpoint": EndpointConfig,
}


@dataclass
class PipelineConfig:
    """PipelineConfig DataClass
    Everything one pipeline run needs.

    Args:
        scene_dir (str): Holds {scene_id}/points.ply, proposals.json and an
            optional situation.json
        out_dir (str): Artifact root. Default: 'out'
        questions (str): Questions JSONL. Default: None
        proposals_dir (str): {scene_id}.json proposal files overriding the
            scene's proposals.json. Default: None
        features_dir (str): {scene_id}.hvf patch features for CDT_MV_HR;
            stub features from the rendered views otherwise. Default: None
        scenes (list): Extra scene ids to process without questions
        mode (str): Ablation mode. Default: 'CDT_MV'
        prune, describe, render, hierarchy: Stage configs
        endpoint (EndpointConfig): None skips asking. Default: None
        seed (int): Seeds stub features, model init and retry jitter. Default: 0
        jobs (int): Scenes processed in parallel. Default: 1
        no_prune (bool): Keep proposals as loaded (ground-truth runs)
        min_confidence (float): Loader confidence gate. Default: 0.0
        figure_compat (bool): Four view placeholders. Default: False
        image_mode (str): 'file' or 'base64' images in dumped bundles
    """
    scene_dir: str = "scenes"
    out_dir: str = "out"
    questions: Optional[str] = None
    proposals_dir: Optional[str] = None
    features_dir: Optional[str] = None
    scenes: List[str] = field(default_factory=list)
    mode: str = "CDT_MV"
    prune: PruneConfig = field(default_factory=PruneConfig)
    describe: DescriptionConfig = field(default_factory=DescriptionConfig)
    render: RenderConfig = field(default_factory=RenderConfig)
    hierarchy: HierarchyConfig = field(default_factory=HierarchyConfig)
    endpoint: Optional[EndpointConfig] = None
    seed: int = 0
    jobs: int = 1
    no_prune: bool = False
    min_confidence: float = 0.0
    figure_compat: bool = False
    image_mode: str = "file"
    verbose: bool = False

    def __post_init__(self):
        try:
            self.mode = AblationMode.parse(self.mode).value
        except Scene2PromptError as ex:
            raise ConfigError(str(ex))
        if self.image_mode not in IMAGE_MODES:
            raise ConfigError(f"[X] image_mode must be one of {IMAGE_MODES}, got '{self.image_mode}'")
        self.jobs = max(1, min(int(self.jobs), cpu_count()))
        self.seed = int(self.seed)
        if not (0.0 <= float(self.min_confidence) <= 1.0):
            raise ConfigError(f"[X] min_confidence must be in [0, 1], got {self.min_confidence}")
        self.scenes = [str(s) for s in (self.scenes or [])]

    @property
    def ablation(self) -> AblationMode:
        return AblationMode.parse(self.mode)

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        """Nested sections become their config dataclasses; unknown keys are
        a ConfigError."""
        data = dict(data or {})
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if len(unknown):
            raise ConfigError(f"[X] Unknown config key(s): {', '.join(unknown)}")
        try:
            for name, section in SECTIONS.items():
                value = data.get(name)
                if isinstance(value, dict):
                    data[name] = section(**value)
                elif value is None and name != "endpoint":
                    data.pop(name, None)
            return cls(**data)
        except TypeError as ex:
            raise ConfigError(f"[X] Invalid config: {ex}")
        except ConfigError:
            raise
        except Scene2PromptError as ex:
            raise ConfigError(f"[X] Invalid config: {str(ex).replace('[X] ', '')}")

    @classmethod
    def from_yaml(cls, path) -> "PipelineConfig":
        if not Imports["yaml"]:
            raise ConfigError("[X] Reading a config file requires PyYAML: pip install pyyaml")
        import yaml
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"[X] Config file not found: {path}")
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (yaml.YAMLError, UnicodeDecodeError) as ex:
            raise ConfigError(f"[X] Malformed config file {path}: {ex}")
        except OSError as ex:
            raise ConfigError(f"[X] Unreadable config file {path}: {ex.strerror or ex}")
        if data is not None and not isinstance(data, dict):
            raise ConfigError(f"[X] Config file {path} must hold a mapping")
        return cls.from_dict(data or {})

    def override(self, **kwargs) -> "PipelineConfig":
        """A copy with the given non-None values; flags win over the file."""
        values = {k: v for k, v in kwargs.items() if v is not None}
        unknown = sorted(set(values) - {f.name for f in fields(self)})
        if len(unknown):
            raise ConfigError(f"[X] Unknown config key(s): {', '.join(unknown)}")
        try:
            return replace(self, **values)
        except Scene2PromptError as ex:
            raise ConfigError(f"[X] Invalid config: {str(ex).replace('[X] ', '')}")

    def verify_paths(self) -> None:
        """Referenced inputs must exist at run time."""
        checks = [("scene_dir", self.scene_dir), ("questions", self.questions),
                  ("proposals_dir", self.proposals_dir), ("features_dir", self.features_dir)]
        for name, value in checks:
            if value is not None and not Path(value).exists():
                raise ConfigError(f"[X] {name} does not exist: {value}")

    def to_dict(self) -> dict:
        data = asdict(self)
        if data.get("endpoint"):
            data["endpoint"].pop("api_key", None)
        return data

    def scene_out(self, scene_id: str) -> Path:
        return Path(self.out_dir) / scene_id


# Stages shared by run_pipeline and the subcommands. Artifacts go through
# write_if_changed.

def proposals_path(config: PipelineConfig, scene_id: str) -> Path:
    if config.proposals_dir is not None:
        return Path(config.proposals_dir) / f"{scene_id}.json"
    return Path(config.scene_dir) / scene_id / "proposals.json"


def stage_load(config: PipelineConfig, scene_id: str) -> Scene:
    return load_scene(config.scene_dir, scene_id, config.min_confidence, proposals=proposals_path(config, scene_id))


def stage_prune(config: PipelineConfig, scene: Scene) -> Scene:
    """Pruned scene; writes proposals.pruned.json."""
    if config.no_prune:
        proposals = list(scene.proposals)
    else:
        proposals = prune_proposals(scene.proposals, config.prune)
    source = read_proposal_file(proposals_path(config, scene.scene_id))["source"]
    save_proposals(config.scene_out(scene.scene_id) / "proposals.pruned.json", scene.scene_id, proposals, source)
    get_logger().debug(f"{scene.scene_id}: {len(scene.proposals)} -> {len(proposals)} proposals")
    return Scene(scene.scene_id, scene.points, scene.colors, tuple(proposals), scene.situation)


def scene_descriptions(config: PipelineConfig, scene: Scene) -> dict:
    """{'CT': .., 'CDT': ..}; CDT is None without an agent pose."""
    ct = coordinate_description(scene, replace(config.describe, mode="CT"))
    cdt = None
    if scene.situation is not None:
        cdt = situated_description(scene, replace(config.describe, mode="CDT"))
    return {"CT": ct, "CDT": cdt}


def stage_describe(config: PipelineConfig, scene: Scene) -> dict:
    """Descriptions; writes description.ct.txt and description.cdt.txt."""
    descriptions = scene_descriptions(config, scene)
    out = config.scene_out(scene.scene_id)
    write_if_changed(out / "description.ct.txt", descriptions["CT"].text + "\n")
    if descriptions["CDT"] is not None:
        write_if_changed(out / "description.cdt.txt", descriptions["CDT"].text + "\n")
    return descriptions


def stage_render(config: PipelineConfig, scene: Scene) -> tuple:
    """(views, png paths); writes views/{scene_id}_{view_id}.png."""
    views = render_scene(scene, config=config.render)
    paths = save_views(views, config.scene_out(scene.scene_id) / "views", scene.scene_id)
    return views, paths


def stage_features(config: PipelineConfig, scene: Scene, views=None):
    """FeatureHierarchy of the scene from {features_dir}/{scene_id}.hvf, or
    from stub features of the rendered views (written to features.hvf). The
    five view tokens and the scene token go to hierarchy.hvf as (1, 6, d)."""
    hcfg = config.hierarchy
    if config.features_dir is not None:
        patches = load_patch_features(Path(config.features_dir) / f"{scene.scene_id}.hvf")
    else:
        views = views if views is not None else render_scene(scene, config=config.render)
        patches = stack([patchify_stub(v, hcfg.grid, hcfg.dim, seed=config.seed) for v in views])
        save_patch_features(config.scene_out(scene.scene_id) / "features.hvf", patches)
    model = init_model(hcfg, seed=config.seed)
    hierarchy = hierarchy_forward(model, patches)
    summary = vstack([hierarchy.view_tokens, hierarchy.scene_token])
    save_patch_features(config.scene_out(scene.scene_id) / "hierarchy.hvf", summary[None])
    get_logger().debug(f"{scene.scene_id}: hierarchy of {len(hierarchy)} tokens")
    return hierarchy


def stage_assemble(config: PipelineConfig, scene: Scene, questions: list, descriptions: dict, view_paths=None) -> list:
    """Bundles for the scene's questions; writes bundles/{question_id}.json."""
    mode = config.ablation
    refs = [Path(p).as_posix() for p in view_paths] if view_paths is not None else None
    out, bundles = config.scene_out(scene.scene_id) / "bundles", []
    for q in questions:
        situation, q_descriptions, q_scene = q.get("situation"), descriptions, scene
        if isinstance(situation, dict):
            pose = load_situation(situation)
            q_scene = Scene(scene.scene_id, scene.points, scene.colors, scene.proposals, pose)
            q_descriptions = scene_descriptions(config, q_scene)
            situation = pose.description or None
        bundle = assemble_prompt(
            q_scene, q["question"], mode, descriptions=q_descriptions, views=refs,
            situation=situation, figure_compat=config.figure_compat, question_id=q["question_id"],
        )
        write_if_changed(out / f"{q['question_id']}.json", dump_bundle(bundle, config.image_mode))
        bundles.append(bundle)
    return bundles


def run_scene(config: PipelineConfig, scene_id: str, questions: list) -> dict:
    """All stages of one scene. Errors are caught and reported per stage."""
    result = {"scene_id": scene_id, "bundles": [], "stage": None, "error": None}
    stage = "load"
    try:
        scene = stage_load(config, scene_id)
        stage = "prune"
        scene = stage_prune(config, scene)
        stage = "describe"
        descriptions = stage_describe(config, scene)
        views = paths = None
        if config.ablation.images:
            stage = "render"
            views, paths = stage_render(config, scene)
        if config.ablation.hierarchical:
            stage = "features"
            stage_features(config, scene, views)
        stage = "assemble"
        result["bundles"] = stage_assemble(config, scene, questions, descriptions, paths)
    except (Scene2PromptError, OSError) as ex:
        result["stage"], result["error"] = stage, str(ex)
    return result


def _scene_job(args) -> dict:
    return run_scene(*args)


def _answer_rows(questions: list, answers: list) -> list:
    rows = []
    for q, a in zip(questions, answers):
        rows.append({
            "question_id": q["question_id"],
            "scene_id": q["scene_id"],
            "question": q["question"],
            "answers": q["answers"],
            "prediction": a.get("answer_text"),
            "error": a.get("error"),
        })
    return rows


def run_pipeline(config: PipelineConfig, questions=None, transport=None, **kwargs) -> int:
    """Pipeline: Run"""
    # Validate Arguments
    logger, stime = get_logger(), perf_counter()
    verbose = kwargs.pop("verbose", config.verbose)
    questions = questions if questions is not None else config.questions
    if isinstance(questions, (str, Path)):
        config = replace(config, questions=str(questions))
        config.verify_paths()
        questions = load_questions(questions)
    else:
        config.verify_paths()
        questions = list(questions or [])

    scene_ids = list(dict.fromkeys([q["scene_id"] for q in questions] + config.scenes))
    if len(scene_ids) == 0:
        raise ConfigError("[X] Nothing to do: no questions and no scenes configured")
    tasks = [(config, sid, [q for q in questions if q["scene_id"] == sid]) for sid in scene_ids]

    # Scenes
    if config.jobs > 1 and len(tasks) > 1:
        with Pool(min(config.jobs, len(tasks))) as pool:
            results = pool.imap(_scene_job, tasks)  # Order over Speed
            if Imports["tqdm"] and verbose:
                from tqdm import tqdm
                results = tqdm(results, "[i] Scenes", total=len(tasks))
            results = list(results)
    else:
        iterator = tasks
        if Imports["tqdm"] and verbose:
            from tqdm import tqdm
            iterator = tqdm(tasks, "[i] Scenes")
        results = [_scene_job(t) for t in iterator]

    failures = [r for r in results if r["error"]]
    for r in failures:
        logger.error(f"{r['scene_id']}: {r['stage']}: {r['error'].replace('[X] ', '')}")
    progress(f"{len(results) - len(failures)}/{len(results)} scenes assembled, {final_time(stime)}")

    # Answers
    failed_answers = 0
    if config.endpoint is not None:
        pairs = [
            (q, b) for r in results for q, b in
            zip([q for q in questions if q["scene_id"] == r["scene_id"]], r["bundles"])
        ]
        answered = [q for q, _ in pairs]
        answers = ask_batch([b for _, b in pairs], config.endpoint, transport=transport, verbose=verbose, seed=config.seed)
        rows = _answer_rows(answered, answers)
        failed_answers = sum(1 for r in rows if r["error"])
        body = "".join(dumps(r, sort_keys=True, ensure_ascii=False) + "\n" for r in rows)
        write_if_changed(Path(config.out_dir) / "answers.jsonl", body)

        records = [
            QaRecord(r["question"], tuple(r["answers"]), r["prediction"], r["scene_id"], r["question_id"])
            for r in rows if r["answers"] and r["prediction"] is not None
        ]
        if len(records):
            report = evaluate_run(records)
            report.save(config.out_dir)
            progress(f"EM@1 {100 * report.em:.1f} over {report.count} answers")

    if len(failures) or failed_answers:
        logger.error(f"{len(failures)} scene(s) and {failed_answers} question(s) failed")
        return 1
    return 0


run_pipeline.__doc__ = \
"""Pipeline: Run

Runs every scene referenced by the questions (plus config.scenes) through
load, prune, describe, render, features (CDT_MV_HR only) and assemble, then
optionally asks the endpoint and scores the answers. Scenes run in a process
pool of config.jobs workers with results kept in scene order; stages within a
scene run one after another. A failing scene is reported with its stage and
does not stop the others. Artifacts are written only when their bytes change,
so a rerun over unchanged inputs leaves every file untouched.

Artifacts:
    {out}/{scene}/proposals.pruned.json
    {out}/{scene}/description.ct.txt, description.cdt.txt
    {out}/{scene}/views/{scene}_{view}.png
    {out}/{scene}/features.hvf (stub features, CDT_MV_HR)
    {out}/{scene}/hierarchy.hvf (view and scene tokens, CDT_MV_HR)
    {out}/{scene}/bundles/{question_id}.json
    {out}/answers.jsonl, report.json, report.txt (with an endpoint)

Args:
    config (PipelineConfig): The run
    questions (str | list): Questions JSONL path or loaded questions.
        Default: config.questions
    transport (httpx.BaseTransport): Injected endpoint transport

Returns:
    int: 0 success, 1 when any scene or question failed

Raises:
    ConfigError: missing inputs or nothing to do
"""
