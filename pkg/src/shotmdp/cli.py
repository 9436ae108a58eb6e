"""Batch command-line pipeline: ingest, build, analyze, whatif, validate, serve.

Every command is deterministic: re-running with the same inputs produces
byte-identical artifacts (sorted orderings, fixed float formatting).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import chain as chain_mod
from . import render
from .config import RunConfig, load_config
from .events import (
    Possession,
    events_to_neutral_json,
    parse_events,
    segment_possessions,
)
from .grid import all_offensive_mask, default_masks
from .model import fit_from_counts, collect_counts, combine_counts, model_from_json, model_to_json, validate_model
from .scenarios import (
    BETTER_SHOT_EVER,
    DIRECT_SHOT,
    FLANK_FIRST_THEN_SHOOT,
    K_MOVES_THEN_SHOOT,
    batch_heatmap,
)
from .whatif import PolicyAdjustment, season_whatif, targeted_zone_selection, validate_baseline

ANALYSES = {
    "shoot_vs_move_k1": (K_MOVES_THEN_SHOOT, 1),
    "shoot_vs_move_k2": (K_MOVES_THEN_SHOOT, 2),
    "flank_first": (FLANK_FIRST_THEN_SHOOT, 2),
    "better_shot": (BETTER_SHOT_EVER, None),
    "direct_shot": (DIRECT_SHOT, None),
}

_FORMAT_SUFFIXES = {"csv": ".csv", "json": ".json", "svg": ".svg"}


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _input_files(root: Path, fmt: str) -> list[Path]:
    if root.is_file():
        return [root]
    suffix = ".csv" if fmt == "neutral_csv" else ".json"
    files = sorted(p for p in root.rglob(f"*{suffix}") if p.is_file())
    if not files:
        raise FileNotFoundError(f"no {suffix} files under {root}")
    return files


def cmd_ingest(args: argparse.Namespace, config: RunConfig) -> int:
    out = Path(args.out)
    files = _input_files(Path(args.input), args.input_format)
    events = []
    skipped: dict[str, int] = defaultdict(int)
    for path in files:
        result = parse_events(
            path.read_bytes(), args.input_format,
            match_id=path.stem, exclude_penalties=config.exclude_penalties,
        )
        events.extend(result.events)
        for kind, count in result.skipped.items():
            skipped[kind] += count
    events.sort(key=lambda e: (e.match_id, e.seq))
    possessions = segment_possessions(events)
    _write(out / "events.json", events_to_neutral_json(events))
    stats = {
        "files": len(files),
        "events": len(events),
        "possessions": len(possessions),
        "skipped": dict(sorted(skipped.items())),
        "teams": sorted({e.team_id for e in events}),
    }
    _write(out / "ingest_stats.json", render.dump_json(stats))
    print(f"ingest: {len(events)} events, {len(possessions)} possessions from {len(files)} file(s) -> {out}")
    return 0


def _load_archive(out: Path, override: str | None) -> list[Possession]:
    path = Path(override) if override else out / "events.json"
    result = parse_events(path.read_bytes(), "neutral_json")
    return segment_possessions(result.events)


def _models_dir(args: argparse.Namespace) -> Path:
    return Path(args.models) if getattr(args, "models", None) else Path(args.out) / "models"


def _load_models(args: argparse.Namespace, team: str | None = None):
    directory = _models_dir(args)
    files = sorted(directory.glob("*.json"))
    if not files:
        raise FileNotFoundError(f"no model artifacts under {directory}")
    models = [model_from_json(p.read_text(encoding="utf-8")) for p in files]
    if team is not None:
        models = [m for m in models if m.team_id == team]
        if not models:
            raise KeyError(f"no model for team {team!r}")
    return models


def cmd_build(args: argparse.Namespace, config: RunConfig) -> int:
    out = Path(args.out)
    possessions = _load_archive(out, args.events)
    by_team: dict[str, list[Possession]] = defaultdict(list)
    for p in possessions:
        by_team[p.team_id].append(p)
    if args.team:
        by_team = {t: ps for t, ps in by_team.items() if t == args.team}
    if not by_team:
        print("build: no possessions to fit", file=sys.stderr)
        return 1
    spec = config.grid

    def tabulate(team: str):
        return team, collect_counts(
            by_team[team], spec,
            intent_mode=config.intent_mode, intent_lambda=config.intent_lambda,
        )

    teams = sorted(by_team)
    with ThreadPoolExecutor() as pool:
        counts = dict(pool.map(tabulate, teams))
    league = combine_counts([counts[t] for t in teams])

    report = {"teams": {}, "violations": 0}
    failures: list[str] = []
    for team in teams:
        try:
            model = fit_from_counts(team, counts[team], alpha=config.alpha, league=league)
        except ValueError as exc:
            failures.append(f"{team}: {exc}")
            continue
        validation = validate_model(model)
        _write(out / "models" / f"{team}.json", model_to_json(model))
        report["teams"][team] = {
            "violations": validation.violations,
            "inert_fraction": render.round9(validation.inert_fraction),
            "events": int(model.action_counts.sum()),
            "possessions": int(model.start_counts.sum()),
            "intent_fallbacks": counts[team].intent_fallbacks,
        }
        report["violations"] += len(validation.violations)
    report["skipped_teams"] = failures
    _write(out / "build_report.json", render.dump_json(report))
    for failure in failures:
        print(f"build: skipped {failure}", file=sys.stderr)
    print(f"build: {len(report['teams'])} model(s) -> {out / 'models'}")
    return 1 if report["violations"] else 0


def model_masks(model, config: RunConfig):
    """Named masks on the model's own grid, with the config's mask parameters."""
    return default_masks(
        model.spec,
        long_distance_max_m=config.long_distance_max_m,
        flank_band_m=config.flank_band_m,
    )


def _region_mask(name: str, model, config: RunConfig):
    if name == "all":
        return all_offensive_mask(model.spec)
    masks = model_masks(model, config)
    if name not in masks:
        raise KeyError(f"unknown region {name!r}")
    return masks[name]


def run_analysis(model, analysis: str, config: RunConfig, *, region: str = "all", k: int | None = None):
    """Shared CLI/API evaluation of one named analysis for one team."""
    if analysis not in ANALYSES:
        raise KeyError(f"unknown analysis {analysis!r}")
    kind, default_k = ANALYSES[analysis]
    depth = k if k is not None else default_k
    mask = _region_mask(region, model, config)
    first_move = model_masks(model, config)["flank"] if kind == FLANK_FIRST_THEN_SHOOT else None
    results = batch_heatmap(model, kind, mask, k=depth, first_move_mask=first_move)
    return results, depth


def cmd_analyze(args: argparse.Namespace, config: RunConfig) -> int:
    out = Path(args.out)
    models = _load_models(args, args.team)
    names = list(ANALYSES) if args.analysis == "all" else [args.analysis]
    if args.analysis == "all":
        names.remove("direct_shot")
    formats = [args.format] if args.format else list(_FORMAT_SUFFIXES)
    for model in models:
        for name in names:
            results, depth = run_analysis(model, name, config, region=args.region, k=args.k)
            base = out / "analysis" / model.team_id / name
            if "csv" in formats:
                _write(base.with_suffix(".csv"), render.heatmap_csv(results))
            if "json" in formats:
                payload = render.heatmap_payload(
                    model.spec, results, team_id=model.team_id, analysis=name, k=depth,
                )
                _write(base.with_suffix(".json"), render.dump_json(payload))
            if "svg" in formats:
                kind, _ = ANALYSES[name]
                if kind in (K_MOVES_THEN_SHOOT, FLANK_FIRST_THEN_SHOOT):
                    values = {r.zone: r.delta for r in results}
                    mode = "diverging"
                else:
                    values = {r.zone: r.probability for r in results}
                    mode = "sequential"
                _write(base.with_suffix(".svg"), render.heatmap_svg(
                    model.spec, values, mode=mode, title=f"{model.team_id}: {name}",
                ))
    print(f"analyze: {len(models)} team(s) x {len(names)} analysis/es -> {out / 'analysis'}")
    return 0


def cmd_whatif(args: argparse.Namespace, config: RunConfig) -> int:
    out = Path(args.out)
    models = _load_models(args, args.team)
    sweep = tuple(float(x) for x in args.sweep.split(",")) if args.sweep else config.sweep
    reports = []
    zone_sets = {}
    for model in models:
        masks = model_masks(model, config)
        if args.mode == "uniform":
            zones = masks["long_distance"]
        else:
            zones = targeted_zone_selection(model, k=config.targeted_k, region=masks["long_distance"])
        zone_sets[model.team_id] = zones.sorted()
        for x in sweep:
            reports.append(season_whatif(
                model, PolicyAdjustment.of(zones, x), quality_adjust=config.quality_adjust,
            ))
    payload = {
        "mode": args.mode,
        "sweep": [render.round9(x) for x in sweep],
        "quality_adjust": config.quality_adjust,
        # the named regions are parameterized approximations; record them
        "mask_params": {
            "long_distance_max_m": config.long_distance_max_m,
            "flank_band_m": config.flank_band_m,
        },
        "zones": zone_sets,
        "reports": [render.season_report_payload(r) for r in reports],
    }
    _write(out / "whatif" / f"{args.mode}_sweep.json", render.dump_json(payload))
    _write(out / "whatif" / f"{args.mode}_sweep.csv", render.sweep_csv(reports))
    print(f"whatif: {len(models)} team(s) x {len(sweep)} adjustment(s) -> {out / 'whatif'}")
    return 0


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    out = Path(args.out)
    models = _load_models(args, args.team)
    possessions = _load_archive(out, args.events)
    by_team: dict[str, list[Possession]] = defaultdict(list)
    for p in possessions:
        by_team[p.team_id].append(p)
    teams = {}
    errors = []
    for model in models:
        team_poss = by_team.get(model.team_id, [])
        empirical = chain_mod.empirical_values(
            team_poss, model.spec, per_possession=config.empirical_per_possession,
        )
        values = chain_mod.scoring_value(chain_mod.induced_chain(model))
        _write(out / "values" / f"{model.team_id}.csv", render.zone_values_csv(values))
        _write(out / "values" / f"{model.team_id}.json",
               render.dump_json(render.value_grid_payload(model.spec, values)))
        mae = empirical.mae_against(values, min_support=config.min_support)
        baseline = validate_baseline(model, team_poss)
        validation = validate_model(model)
        if baseline.relative_error is not None:
            errors.append(baseline.relative_error)
        teams[model.team_id] = {
            "value_mae": render.round9(mae) if np.isfinite(mae) else None,
            "goal_relative_error": (
                render.round9(baseline.relative_error) if baseline.relative_error is not None else None
            ),
            "expected_goals": render.round9(baseline.expected_goals),
            "actual_goals": baseline.actual_goals,
            "inert_fraction": render.round9(validation.inert_fraction),
            "violations": validation.violations,
        }
    payload = {
        "teams": teams,
        "league_goal_relative_error": render.round9(float(np.mean(errors))) if errors else None,
        "min_support": config.min_support,
    }
    _write(out / "validate_report.json", render.dump_json(payload))
    print(f"validate: {len(models)} team(s) -> {out / 'validate_report.json'}")
    return 0


def cmd_serve(args: argparse.Namespace, config: RunConfig) -> int:
    import uvicorn

    from .server import create_app, load_store

    store = load_store(_models_dir(args), config)
    app = create_app(store, static_dir=Path(args.static) if args.static else None)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shotmdp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key-value config file")
        p.add_argument("--out", default="build", help="artifact directory")
        p.add_argument("--team", help="restrict to one team id")

    p = sub.add_parser("ingest", help="parse raw event data into the neutral archive")
    common(p)
    p.add_argument("--input", required=True, help="input file or directory")
    p.add_argument("--input-format", default="neutral_json",
                   choices=["neutral_csv", "neutral_json", "statsbomb_open"])
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("build", help="fit one model per team from the archive")
    common(p)
    p.add_argument("--events", help="archive path (default <out>/events.json)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("analyze", help="scenario heatmaps per team")
    common(p)
    p.add_argument("--models", help="model directory (default <out>/models)")
    p.add_argument("--analysis", default="all", choices=["all", *ANALYSES])
    p.add_argument("--region", default="all",
                   choices=["all", "long_distance", "penalty_box", "flank"])
    p.add_argument("-k", type=int, help="move-depth override")
    p.add_argument("--format", choices=list(_FORMAT_SUFFIXES), help="emit one format only")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("whatif", help="season goal deltas for shooting-frequency sweeps")
    common(p)
    p.add_argument("--models", help="model directory (default <out>/models)")
    p.add_argument("--mode", default="uniform", choices=["uniform", "targeted"])
    p.add_argument("--sweep", help="comma-separated relative changes (overrides config)")
    p.set_defaults(func=cmd_whatif)

    p = sub.add_parser("validate", help="model-vs-data diagnostics")
    common(p)
    p.add_argument("--models", help="model directory (default <out>/models)")
    p.add_argument("--events", help="archive path (default <out>/events.json)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="read-only HTTP API over fitted models")
    common(p)
    p.add_argument("--models", help="model directory (default <out>/models)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--static", help="directory of UI assets to serve at /ui")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except (FileNotFoundError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
