# -*- coding: utf-8 -*-
import argparse
import sys
from dataclasses import replace
from json import dumps
from pathlib import Path
from time import perf_counter

from numpy.random import default_rng

from scene2prompt import HIERARCHY, version
from scene2prompt.client import EndpointConfig, ask_batch
from scene2prompt.core import (
    PipelineConfig, run_pipeline, scene_descriptions, stage_describe, stage_features,
    stage_load, stage_prune, stage_render
)
from scene2prompt.describe import DescriptionConfig
from scene2prompt.evaluate import evaluate_run, load_records
from scene2prompt.hiervis import (
    HierarchyConfig, ToyVocabulary, gradient_check, hierarchy_forward,
    init_model, load_checkpoint, save_checkpoint, train_toy
)
from scene2prompt.ingest import load_patch_features, load_questions, proposal_source
from scene2prompt.prompt import estimate_tokens, load_bundle
from scene2prompt.pruning import PruneConfig
from scene2prompt.render import RenderConfig
from scene2prompt.utils import (
    ConfigError, Scene2PromptError, final_time,
    get_logger, progress, read_input_text, set_verbose, write_if_changed
)

EXIT_OK, EXIT_PARTIAL, EXIT_CONFIG = 0, 1, 2
GRADCHECK_TOLERANCE = 1e-4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scene2prompt",
        description="Compile 3D scenes into multimodal prompts for a vision-language model.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {version}")
    parser.add_argument("--config", type=Path, default=None, help="YAML pipeline config; flags override it")
    parser.add_argument("--seed", type=int, default=None, help="Seed of every random draw (default 0)")
    parser.add_argument("--jobs", type=int, default=None, help="Scenes processed in parallel (default 1)")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging and progress bars")

    # Flags shared by the scene stages
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scene-dir", dest="scene_dir", default=None, help="Directory of {scene_id}/points.ply, proposals.json")
    common.add_argument("--out-dir", dest="out_dir", default=None, help="Artifact root (default out)")
    common.add_argument("--proposals-dir", dest="proposals_dir", default=None, help="{scene_id}.json proposal files")
    common.add_argument("--features-dir", dest="features_dir", default=None, help="{scene_id}.hvf patch features")
    common.add_argument("--mode", default=None, help="MV, CT, CDT, CDT_MV, CDT_MV_HR or ZS_CDT_MV (default CDT_MV)")
    common.add_argument("--no-prune", dest="no_prune", action="store_const", const=True, default=None, help="Skip NMS and relabeling")
    common.add_argument("--min-confidence", dest="min_confidence", type=float, default=None, help="Drop proposals below this confidence")
    common.add_argument("--iou-threshold", dest="iou_threshold", type=float, default=None, help="NMS IoU threshold (default 0.5)")
    common.add_argument("--vote-weighting", dest="vote_weighting", choices=("confidence", "count"), default=None, help="Relabel votes weighted by confidence or counted (default confidence)")
    common.add_argument("--precision", type=int, choices=(2, 4), default=None, help="Coordinate decimals (default 2)")
    common.add_argument("--append-coordinates", dest="append_coordinates", action="store_const", const=True, default=None, help="Follow CDT with the CT list")
    common.add_argument("--width", type=int, default=None, help="Image width (default 448)")
    common.add_argument("--height", type=int, default=None, help="Image height (default 448)")
    common.add_argument("--splat-radius", dest="splat_radius", type=int, default=None, help="Point disc radius in pixels (default 2)")
    common.add_argument("--no-numba", dest="numba", action="store_const", const=False, default=None, help="Use the numpy splat kernel")
    common.add_argument("--figure-compat", dest="figure_compat", action="store_const", const=True, default=None, help="Four view placeholders")
    common.add_argument("--image-mode", dest="image_mode", choices=("file", "base64"), default=None, help="Images in dumped bundles")

    endpoint = argparse.ArgumentParser(add_help=False)
    endpoint.add_argument("--base-url", dest="base_url", default=None, help="Chat-completions base URL, e.g. http://localhost:8000/v1")
    endpoint.add_argument("--model", default=None, help="Model name for finetuned modes")
    endpoint.add_argument("--zero-shot-model", dest="zero_shot_model", default=None, help="Model name for ZS_CDT_MV")
    endpoint.add_argument("--parallelism", type=int, default=None, help="Requests in flight (default 4)")
    endpoint.add_argument("--max-retries", dest="max_retries", type=int, default=None, help="Retries on 5xx/timeout (default 3)")
    endpoint.add_argument("--timeout", type=float, default=None, help="Seconds per attempt (default 60)")
    endpoint.add_argument("--cache-dir", dest="cache_dir", default=None, help="Response cache root")
    endpoint.add_argument("--no-cache", dest="use_cache", action="store_const", const=False, default=None, help="Bypass the response cache")

    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="Load scenes and report what was parsed")
    p.add_argument("scene_ids", nargs="+", help="Scene ids")

    for name, helptext in (("prune", "Write proposals.pruned.json"),
                           ("describe", "Write description.ct.txt / description.cdt.txt"),
                           ("render", "Write the five view PNGs")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("scene_ids", nargs="+", help="Scene ids")

    p = sub.add_parser("features", parents=[common], help="Stub or imported patch features and the hierarchy")
    p.add_argument("scene_ids", nargs="+", help="Scene ids")
    _hierarchy_flags(p)

    p = sub.add_parser("hier", parents=[common], help="Hierarchy forward, toy training or gradient check")
    p.add_argument("action", choices=("forward", "train", "gradcheck"))
    p.add_argument("--features", type=Path, default=None, help="forward: .hvf file")
    p.add_argument("--checkpoint", type=Path, default=None, help="forward: model to load; train: where to save")
    p.add_argument("--questions", type=Path, default=None, help="train: questions JSONL with answers")
    p.add_argument("--steps", type=int, default=500, help="train: gradient steps (default 500)")
    p.add_argument("--lr", type=float, default=0.05, help="train: learning rate (default 0.05)")
    p.add_argument("--instances", type=int, default=10, help="gradcheck: random instances (default 10)")
    _hierarchy_flags(p)

    p = sub.add_parser("assemble", parents=[common], help="Write prompt bundles for a questions file")
    p.add_argument("questions", type=Path, help="Questions JSONL")

    p = sub.add_parser("ask", parents=[endpoint], help="Send dumped bundles to the endpoint")
    p.add_argument("bundles", nargs="+", type=Path, help="Bundle JSON files")
    p.add_argument("--output", type=Path, default=None, help="Answers JSONL (default stdout)")

    p = sub.add_parser("eval", help="Score an answers JSONL")
    p.add_argument("records", type=Path, help="JSONL with question, references/answers, prediction")
    p.add_argument("--out-dir", dest="out_dir", type=Path, default=None, help="Write report.json and report.txt here")

    p = sub.add_parser("pipeline", parents=[common, endpoint], help="Run every stage end to end")
    p.add_argument("questions", type=Path, nargs="?", default=None, help="Questions JSONL (or questions: in the config)")

    return parser


def _hierarchy_flags(p) -> None:
    p.add_argument("--dim", type=int, default=None, help=f"Model dim (default {HIERARCHY['DIM']})")
    p.add_argument("--heads", type=int, default=None, help=f"Attention heads (default {HIERARCHY['HEADS']})")
    p.add_argument("--grid", type=int, default=None, help=f"Stub patch grid (default {HIERARCHY['GRID']})")


def _section(base, cls, args, names):
    """base with the given flag values applied, rebuilt through cls."""
    values = {n: getattr(args, n) for n in names if getattr(args, n, None) is not None}
    if not len(values): return base
    current = dict(base.__dict__) if base is not None else {}
    current.update(values)
    try:
        return cls(**current)
    except Scene2PromptError as ex:
        raise ConfigError(f"[X] Invalid flag value: {str(ex).replace('[X] ', '')}")


def load_config(args) -> PipelineConfig:
    """Config file first, then flags."""
    config = PipelineConfig.from_yaml(args.config) if args.config is not None else PipelineConfig()
    config = config.override(**{
        k: getattr(args, k, None) for k in (
            "seed", "jobs", "scene_dir", "out_dir", "proposals_dir", "features_dir", "mode",
            "no_prune", "min_confidence", "figure_compat", "image_mode",
        )
    })
    config = config.override(
        verbose=args.verbose or config.verbose,
        prune=_section(config.prune, PruneConfig, args, ("iou_threshold", "vote_weighting")),
        describe=_section(config.describe, DescriptionConfig, args, ("precision", "append_coordinates")),
        render=_section(config.render, RenderConfig, args, ("width", "height", "splat_radius", "numba")),
        hierarchy=_section(config.hierarchy, HierarchyConfig, args, ("dim", "heads", "grid")),
    )
    names = ("base_url", "model", "zero_shot_model", "parallelism", "max_retries", "timeout", "cache_dir", "use_cache")
    if config.endpoint is not None or getattr(args, "base_url", None) is not None:
        config = config.override(endpoint=_section(config.endpoint or EndpointConfig(), EndpointConfig, args, names))
    return config


def _each_scene(config, scene_ids, action) -> int:
    failed = 0
    for sid in scene_ids:
        try:
            action(sid)
        except Scene2PromptError as ex:
            failed += 1
            get_logger().error(f"{sid}: {str(ex).replace('[X] ', '')}")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_ingest(config, args) -> int:
    def action(sid):
        scene = stage_load(config, sid)
        pose = "none" if scene.situation is None else f"yaw {scene.situation.yaw:.4f}"
        source = proposal_source(config.scene_dir, sid) if config.proposals_dir is None else "predicted"
        print(f"{sid}: {scene.size} points, {len(scene.proposals)} {source} proposals, situation {pose}")
    return _each_scene(config, args.scene_ids, action)


def cmd_prune(config, args) -> int:
    return _each_scene(config, args.scene_ids, lambda sid: stage_prune(config, stage_load(config, sid)))


def cmd_describe(config, args) -> int:
    return _each_scene(config, args.scene_ids, lambda sid: stage_describe(config, stage_prune(config, stage_load(config, sid))))


def cmd_render(config, args) -> int:
    return _each_scene(config, args.scene_ids, lambda sid: stage_render(config, stage_load(config, sid)))


def cmd_features(config, args) -> int:
    def action(sid):
        hierarchy = stage_features(config, stage_load(config, sid))
        print(f"{sid}: {hierarchy.patches.shape[0]} views x {hierarchy.patches_per_view} patches -> {len(hierarchy)} tokens")
    return _each_scene(config, args.scene_ids, action)


def _training_description(config, scene) -> str:
    """The scene text the mode would put in the prompt; CT when the mode has
    none or the scene lacks the agent pose CDT needs."""
    descriptions = scene_descriptions(config, scene)
    chosen = descriptions.get(config.ablation.scene_text or "CT") or descriptions["CT"]
    return chosen.text


def cmd_hier(config, args) -> int:
    hcfg = config.hierarchy
    if args.action == "forward":
        if args.features is None:
            raise ConfigError("[X] hier forward needs --features FILE.hvf")
        patches = load_patch_features(args.features)
        model = load_checkpoint(args.checkpoint) if args.checkpoint else init_model(hcfg, seed=config.seed)
        hierarchy = hierarchy_forward(model, patches)
        print(f"f_v: {len(hierarchy)} tokens x {hierarchy.f_v.shape[1]} dims")
        return EXIT_OK

    if args.action == "train":
        if args.questions is None:
            raise ConfigError("[X] hier train needs --questions FILE.jsonl")
        questions = [q for q in load_questions(args.questions) if q["answers"]]
        if len(questions) == 0:
            raise ConfigError("[X] hier train needs questions with answers")
        features, texts = {}, {}
        for sid in dict.fromkeys(q["scene_id"] for q in questions):
            scene = stage_prune(config, stage_load(config, sid))
            texts[sid] = _training_description(config, scene)
            features[sid] = stage_features(config, scene).patches
        vocab = ToyVocabulary.from_texts(
            list(texts.values()) + [q["question"] for q in questions] + [q["answers"][0] for q in questions]
        )
        # context is the scene description followed by the question
        examples = [
            (features[q["scene_id"]], vocab.encode(q["answers"][0])[:hcfg.max_answer],
             vocab.encode(texts[q["scene_id"]]) + vocab.encode(q["question"]))
            for q in questions
        ]
        stime = perf_counter()
        losses, model = train_toy(examples, args.steps, args.lr, config=hcfg, vocab_size=len(vocab), seed=config.seed, verbose=config.verbose)
        if args.checkpoint is not None:
            save_checkpoint(args.checkpoint, model)
        print(f"loss {losses[0]:.6f} -> {losses[-1]:.6f} over {len(losses)} steps, {final_time(stime)}")
        return EXIT_OK

    # gradcheck on small random instances
    rng = default_rng(config.seed)
    worst = 0.0
    small = HierarchyConfig(dim=8, heads=4, ffn_mult=hcfg.ffn_mult, views=hcfg.views, grid=hcfg.grid, max_answer=4)
    for i in range(args.instances):
        model = init_model(small, vocab_size=5, seed=int(rng.integers(1 << 31)))
        patches = rng.normal(size=(small.views, 2, small.dim))
        targets = list(rng.integers(0, 5, size=2))
        errors = gradient_check(model, (patches, targets, ()))
        name = max(errors, key=errors.get)
        worst = max(worst, errors[name])
        get_logger().debug(f"instance {i}: worst {name} {errors[name]:.3e}")
    print(f"worst relative error {worst:.3e} over {args.instances} instances")
    return EXIT_OK if worst < GRADCHECK_TOLERANCE else EXIT_PARTIAL


def cmd_assemble(config, args) -> int:
    return run_pipeline(replace(config, endpoint=None), args.questions)


def cmd_ask(config, args) -> int:
    endpoint = config.endpoint or EndpointConfig()
    bundles = [load_bundle(read_input_text(p, "Bundle")) for p in args.bundles]
    results = ask_batch(bundles, endpoint, verbose=config.verbose, seed=config.seed)
    rows = [
        {"question_id": r["question_id"], "prediction": r.get("answer_text"), "error": r.get("error"),
         "tokens": estimate_tokens(b)}
        for b, r in zip(bundles, results)
    ]
    body = "".join(dumps(r, sort_keys=True, ensure_ascii=False) + "\n" for r in rows)
    if args.output is not None:
        write_if_changed(args.output, body)
    else:
        sys.stdout.write(body)
    return EXIT_PARTIAL if any(r["error"] for r in rows) else EXIT_OK


def cmd_eval(config, args) -> int:
    report = evaluate_run(load_records(args.records, skip_unscored=True))
    if args.out_dir is not None:
        report.save(args.out_dir)
    sys.stdout.write(report.to_table())
    return EXIT_OK


def cmd_pipeline(config, args) -> int:
    questions = args.questions if args.questions is not None else config.questions
    if questions is None:
        raise ConfigError("[X] pipeline needs a questions file")
    return run_pipeline(config, questions)


COMMANDS = {
    "ingest": cmd_ingest, "prune": cmd_prune, "describe": cmd_describe,
    "render": cmd_render, "features": cmd_features, "hier": cmd_hier,
    "assemble": cmd_assemble, "ask": cmd_ask, "eval": cmd_eval,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    set_verbose(args.verbose, cli=True)
    stime = perf_counter()
    try:
        config = load_config(args)
        code = COMMANDS[args.command](config, args)
    except ConfigError as ex:
        get_logger().error(str(ex).replace("[X] ", ""))
        return EXIT_CONFIG
    except Scene2PromptError as ex:
        get_logger().error(str(ex).replace("[X] ", ""))
        return EXIT_PARTIAL
    progress(f"{args.command} finished, {final_time(stime)}")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
