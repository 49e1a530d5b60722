"""Command-line surface: solve bundled or user-supplied documents.

Reports go to stdout (or --out) as JSON or TSV and are byte-deterministic for
identical inputs and flags.  Exit codes: 0 success, 1 infeasible or empty
result, 2 input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import presets
from .documents import (
    ParseError,
    ValidationError,
    parse_script_file,
    parse_space_file,
    rational_to_json,
)
from .dot import export_dot
from .model import DesignSpace, InputError, Route, make_space
from .morphology import CompositeDA, EmptySynthesisError, MorphStructure, synthesize_hierarchical
from .routing import (
    InfeasibleError,
    NoFeasibleRouteError,
    OrienteeringInstance,
    k_shortest_paths,
    multicriteria_shortest,
    orienteering_exact,
    orienteering_multiobjective,
    shortest_path,
)
from .trajectory import Scenario, multistage_synthesize
from .treatment import TreatmentScheme, UnknownOutcomeError


class _CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _fingerprint(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _jsonable(value):
    if isinstance(value, Fraction):
        return rational_to_json(value)
    if isinstance(value, tuple):
        return [_jsonable(v) for v in value]
    if isinstance(value, list):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _route_json(route: Route) -> dict:
    return {
        "vertices": list(route.vertices),
        "cost": _jsonable(route.cost),
        "profit": _jsonable(route.profit),
        "duration": _jsonable(route.duration),
    }


def _composite_json(comp: CompositeDA) -> dict:
    return {
        "label": comp.label,
        "components": list(comp.components),
        "choice": dict(sorted(comp.choice.items())),
        "quality": {"w": comp.quality.w, "counts": list(comp.quality.counts)},
    }


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return str(rational_to_json(value))
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def _load_space(path: Path) -> DesignSpace:
    value = parse_space_file(path)
    if not isinstance(value, DesignSpace):
        raise _CommandError(2, f"{path}: expected a space document, found {type(value).__name__}")
    return value


def _pick_endpoint(space: DesignSpace, flag_value: str | None, pool: frozenset[str], what: str) -> str:
    if flag_value is not None:
        if flag_value not in space.by_id:
            raise _CommandError(2, f"unknown {what} vertex {flag_value!r}")
        return flag_value
    if len(pool) == 1:
        return next(iter(pool))
    raise _CommandError(2, f"space declares {len(pool)} {what}s; pass --{what}")


def _emit(args, run: dict, body: dict, table: list[list[str]]) -> None:
    if args.format == "tsv":
        text = "\n".join("\t".join(row) for row in table) + "\n"
    else:
        text = json.dumps({"run": run, **body}, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    _write(args, text)


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _run_meta(args, subcommand: str, parameters: dict, files: dict[str, Path]) -> dict:
    return {
        "subcommand": subcommand,
        "parameters": {k: _jsonable(v) for k, v in sorted(parameters.items())},
        "fingerprints": {name: _fingerprint(path) for name, path in sorted(files.items())},
    }


# --------------------------------------------------------------------------
# subcommands

def _cmd_solve_sp(args) -> int:
    path = Path(args.input)
    space = _load_space(path)
    origin = _pick_endpoint(space, args.origin, space.origins, "origin")
    goal = _pick_endpoint(space, args.goal, space.goals, "goal")
    route = shortest_path(space, origin, goal)
    run = _run_meta(args, "solve-sp", {"origin": origin, "goal": goal}, {"input": path})
    if route is None:
        _emit(args, run, {"route": None}, [["route"], ["unreachable"]])
        return 1
    table = [["vertices", "cost"], [">".join(route.vertices), _fmt(route.cost)]]
    _emit(args, run, {"route": _route_json(route)}, table)
    return 0


def _cmd_solve_ksp(args) -> int:
    path = Path(args.input)
    if args.k < 1:
        raise _CommandError(2, f"--k must be >= 1, got {args.k}")
    space = _load_space(path)
    origin = _pick_endpoint(space, args.origin, space.origins, "origin")
    goal = _pick_endpoint(space, args.goal, space.goals, "goal")
    routes = k_shortest_paths(space, origin, goal, args.k)
    run = _run_meta(args, "solve-ksp", {"origin": origin, "goal": goal, "k": args.k}, {"input": path})
    table = [["rank", "vertices", "cost"]]
    for i, r in enumerate(routes, 1):
        table.append([str(i), ">".join(r.vertices), _fmt(r.cost)])
    _emit(args, run, {"routes": [_route_json(r) for r in routes]}, table)
    return 0 if routes else 1


def _cmd_solve_mc_sp(args) -> int:
    path = Path(args.input)
    space = _load_space(path)
    origin = _pick_endpoint(space, args.origin, space.origins, "origin")
    goal = _pick_endpoint(space, args.goal, space.goals, "goal")
    routes = multicriteria_shortest(space, origin, goal)
    run = _run_meta(args, "solve-mc-sp", {"origin": origin, "goal": goal}, {"input": path})
    table = [["vertices", "cost"]]
    for r in routes:
        table.append([">".join(r.vertices), _fmt(r.cost)])
    _emit(args, run, {"routes": [_route_json(r) for r in routes]}, table)
    return 0 if routes else 1


def _project_criterion(space: DesignSpace, name: str | None) -> DesignSpace:
    if len(space.criteria) == 1 and name is None:
        return space
    if name is None:
        raise _CommandError(2, "space has several profit criteria; pass --criterion")
    index = next((i for i, c in enumerate(space.criteria) if c.name == name), None)
    if index is None:
        raise _CommandError(2, f"unknown criterion {name!r}")
    vertices = tuple(
        type(v)(v.id, v.kind, (v.profit[index],), v.duration, v.labels) for v in space.vertices
    )
    return make_space(vertices, space.arcs, space.origins, space.goals, (space.criteria[index],))


def _parse_cap(raw: str | None, flag: str) -> Fraction | None:
    if raw is None:
        return None
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise _CommandError(2, f"{flag} must be a rational number, got {raw!r}")
    if value < 0:
        raise _CommandError(2, f"{flag} must be nonnegative, got {raw}")
    return value


def _cmd_orienteer(args) -> int:
    path = Path(args.input)
    budget = _parse_cap(args.budget, "--budget")
    arc_cap = _parse_cap(args.arc_cap, "--arc-cap")
    time_cap = _parse_cap(args.time_cap, "--time-cap")
    space = _load_space(path)
    start = _pick_endpoint(space, args.start, space.origins, "start")
    end = _pick_endpoint(space, args.end, space.goals, "end")
    params = {"start": start, "end": end}
    if budget is not None:
        if arc_cap is not None or time_cap is not None:
            raise _CommandError(2, "--budget excludes --arc-cap/--time-cap")
        scalar_space = _project_criterion(space, args.criterion)
        params["budget"] = budget
        inst = OrienteeringInstance(scalar_space, start, end, budget=budget)
        run = _run_meta(args, "orienteer", params, {"input": path})
        try:
            route, score = orienteering_exact(inst)
        except InfeasibleError as exc:
            _emit(args, run, {"feasible": False, "reason": str(exc)}, [["feasible"], ["no"]])
            return 1
        table = [["vertices", "score", "cost"], [">".join(route.vertices), _fmt(score), _fmt(route.cost)]]
        _emit(args, run, {"feasible": True, "route": _route_json(route), "score": _jsonable(score)}, table)
        return 0
    if arc_cap is None:
        raise _CommandError(2, "pass --budget R, or --arc-cap R with --time-cap R")
    params["arc_cap"] = arc_cap
    params["time_cap"] = time_cap
    inst = OrienteeringInstance(space, start, end, arc_cap=arc_cap, time_cap=time_cap)
    routes = orienteering_multiobjective(inst)
    run = _run_meta(args, "orienteer", params, {"input": path})
    table = [["vertices", "profit", "cost", "duration"]]
    for r in routes:
        table.append([">".join(r.vertices), _fmt(r.profit), _fmt(r.cost), _fmt(r.duration)])
    _emit(args, run, {"routes": [_route_json(r) for r in routes]}, table)
    return 0 if routes else 1


def _cmd_synthesize(args) -> int:
    path = Path(args.input)
    value = parse_space_file(path)
    if not isinstance(value, MorphStructure):
        raise _CommandError(2, f"{path}: expected a morph document, found {type(value).__name__}")
    run = _run_meta(args, "synthesize", {}, {"input": path})
    try:
        composites = synthesize_hierarchical(value)
    except EmptySynthesisError as exc:
        _emit(args, run, {"composites": [], "empty_node": exc.node}, [["empty_node"], [exc.node]])
        return 1
    table = [["label", "components", "quality"]]
    for comp in composites:
        table.append([comp.label, "*".join(comp.components), str(comp.quality)])
    _emit(args, run, {"composites": [_composite_json(c) for c in composites]}, table)
    return 0 if composites else 1


def _cmd_plan_stages(args) -> int:
    path = Path(args.input)
    value = parse_space_file(path)
    if not isinstance(value, Scenario):
        raise _CommandError(2, f"{path}: expected a scenario document, found {type(value).__name__}")
    result = multistage_synthesize(value)
    run = _run_meta(args, "plan-stages", {}, {"input": path})
    body = {
        "stage_sets": {
            stage.id: [_composite_json(c) for c in composites]
            for stage, composites in zip(value.stages, result.stage_sets)
        },
        "trajectories": [
            {
                "composites": [c.label for c in t.composites],
                "quality": {"w": t.quality.w, "counts": list(t.quality.counts)},
            }
            for t in result.trajectories
        ],
        "blocking": list(result.blocking) if result.blocking else None,
    }
    table = [["trajectory", "quality"]]
    for t in result.trajectories:
        table.append([">".join(c.label for c in t.composites), str(t.quality)])
    _emit(args, run, body, table)
    return 0 if result.trajectories else 1


def _cmd_plan_treatment(args) -> int:
    path = Path(args.input) if args.input else presets.data_path("medical_scheme.json")
    script_path = Path(args.script) if args.script else presets.individual_script_path()
    value = parse_space_file(path)
    if not isinstance(value, TreatmentScheme):
        raise _CommandError(2, f"{path}: expected a scheme document, found {type(value).__name__}")
    script, selections = parse_script_file(script_path)
    result = presets.medical_pipeline(script, selections, value, args.max_visits)
    run = _run_meta(
        args,
        "plan-treatment",
        {"max_visits": args.max_visits},
        {"input": path, "script": script_path},
    )
    body = {
        "steps": [{"point": s.point, "composite": _composite_json(s.composite)} for s in result.steps],
        "points": list(result.points),
        "completed": result.completed,
        "truncation": (
            {"reason": result.truncation.reason, "point": result.truncation.point}
            if result.truncation
            else None
        ),
    }
    table = [["point", "composite"]]
    for s in result.steps:
        table.append([s.point, s.composite.label])
    _emit(args, run, body, table)
    return 0 if result.completed else 1


def _cmd_edu(args) -> int:
    path = presets.data_path("educational_space.json")
    space = presets.load_space()
    if args.audit:
        records = presets.audit_reference_routes(space)
        run = _run_meta(args, "edu", {"audit": True}, {"input": path})
        body = {
            "discrepancies": [
                {
                    "route_id": r.route_id,
                    "field": r.field,
                    "reference_value": _jsonable(r.reference_value),
                    "recomputed_value": _jsonable(r.recomputed_value),
                }
                for r in records
            ]
        }
        table = [["route_id", "field", "reference", "recomputed"]]
        for r in records:
            table.append([r.route_id, r.field, _fmt(r.reference_value), _fmt(r.recomputed_value)])
        _emit(args, run, body, table)
        return 0
    arc_cap = _parse_cap(args.arc_cap, "--arc-cap")
    time_cap = _parse_cap(args.time_cap, "--time-cap")
    if arc_cap is None:
        arc_cap = presets.DEFAULT_ARC_CAP
    if time_cap is None:
        time_cap = presets.DEFAULT_TIME_CAP
    result = presets.edu_pipeline(space, arc_cap=arc_cap, time_cap=time_cap)
    run = _run_meta(
        args,
        "edu",
        {"arc_cap": arc_cap, "time_cap": time_cap},
        {"input": path},
    )
    body = {
        "templates": [
            {
                "id": report.template.id,
                "classes": list(report.template.classes),
                "feasible": report.feasible,
                "tie_classes": [
                    {
                        "cost": _jsonable(tc.cost),
                        "members": [
                            {
                                "vertices": list(m.route.vertices),
                                "profit": _jsonable(m.route.profit),
                                "duration": _jsonable(m.route.duration),
                                "pareto_rank": m.pareto_rank,
                            }
                            for m in tc.members
                        ],
                    }
                    for tc in report.tie_classes
                ],
                "winners": [list(r.vertices) for r in report.winners],
            }
            for report in result.templates
        ],
        "pool": [
            {"template": tid, "route": _route_json(r)} for tid, r in result.pool
        ],
        "pareto": [
            {"template": tid, "route": _route_json(r)} for tid, r in result.pareto
        ],
        "ranking": [
            {"template": tid, "vertices": list(r.vertices)} for tid, r in result.ranking
        ],
    }
    table = [["rank", "template", "vertices", "profit", "duration", "cost", "pareto"]]
    pareto_keys = {r.vertices for _, r in result.pareto}
    for i, (tid, r) in enumerate(result.ranking, 1):
        table.append([
            str(i),
            tid,
            ">".join(r.vertices),
            _fmt(r.profit),
            _fmt(r.duration),
            _fmt(r.cost),
            "yes" if r.vertices in pareto_keys else "no",
        ])
    _emit(args, run, body, table)
    return 0 if result.pareto else 1


def _cmd_startup(args) -> int:
    path = presets.data_path("startup_scenario.json")
    scenario = presets.load_scenario()
    result = presets.startup_pipeline(scenario)
    run = _run_meta(args, "startup", {}, {"input": path})
    body = {
        "stage_sets": {
            stage.id: [_composite_json(c) for c in composites]
            for stage, composites in zip(scenario.stages, result.stage_sets)
        },
        "trajectories": [
            {
                "composites": [c.label for c in t.composites],
                "quality": {"w": t.quality.w, "counts": list(t.quality.counts)},
            }
            for t in result.trajectories
        ],
    }
    table = [["trajectory", "quality"]]
    for t in result.trajectories:
        table.append([">".join(c.label for c in t.composites), str(t.quality)])
    _emit(args, run, body, table)
    return 0 if result.trajectories else 1


def _cmd_export_dot(args) -> int:
    path = Path(args.input)
    value = parse_space_file(path)
    if not isinstance(value, (DesignSpace, TreatmentScheme)):
        raise _CommandError(2, f"{path}: only space and scheme documents render to DOT")
    routes = [tuple(spec.split(",")) for spec in args.route or []]
    _write(args, export_dot(value, routes))
    return 0


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="routespace",
        description="Route/trajectory decision making over design/solving spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="document file")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "tsv"), default="json")

    p = sub.add_parser("solve-sp", help="single-criterion shortest path")
    common(p)
    p.add_argument("--origin")
    p.add_argument("--goal")
    p.set_defaults(fn=_cmd_solve_sp)

    p = sub.add_parser("solve-ksp", help="k shortest simple paths")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--origin")
    p.add_argument("--goal")
    p.set_defaults(fn=_cmd_solve_ksp)

    p = sub.add_parser("solve-mc-sp", help="multicriteria shortest path Pareto set")
    common(p)
    p.add_argument("--origin")
    p.add_argument("--goal")
    p.set_defaults(fn=_cmd_solve_mc_sp)

    p = sub.add_parser("orienteer", help="budgeted profit-collecting route")
    common(p)
    p.add_argument("--start")
    p.add_argument("--end")
    p.add_argument("--budget", type=str, default=None, help="total arc-cost budget (exact variant)")
    p.add_argument("--arc-cap", dest="arc_cap", type=str, default=None, help="per-arc cost cap (multiobjective variant)")
    p.add_argument("--time-cap", dest="time_cap", type=str, default=None, help="summed-duration cap")
    p.add_argument("--criterion", help="profit criterion for the exact variant")
    p.set_defaults(fn=_cmd_orienteer)

    p = sub.add_parser("synthesize", help="morphological synthesis of a system model")
    common(p)
    p.set_defaults(fn=_cmd_synthesize)

    p = sub.add_parser("plan-stages", help="multistage scenario trajectories")
    common(p)
    p.set_defaults(fn=_cmd_plan_stages)

    p = sub.add_parser("plan-treatment", help="walk a treatment scheme against a script")
    common(p, needs_input=False)
    p.add_argument("--input", help="scheme document (default: bundled scheme)")
    p.add_argument("--script", help="outcome script file (default: bundled script)")
    p.add_argument("--max-visits", dest="max_visits", type=int, default=3)
    p.set_defaults(fn=_cmd_plan_treatment)

    p = sub.add_parser("edu", help="bundled educational-trajectory pipeline")
    common(p, needs_input=False)
    p.add_argument("--audit", action="store_true", help="diff the bundled reference table against recomputation")
    p.add_argument("--arc-cap", dest="arc_cap", type=str, default=None)
    p.add_argument("--time-cap", dest="time_cap", type=str, default=None)
    p.set_defaults(fn=_cmd_edu)

    p = sub.add_parser("startup", help="bundled start-up scenario pipeline")
    common(p, needs_input=False)
    p.set_defaults(fn=_cmd_startup)

    p = sub.add_parser("export-dot", help="render a space or scheme as DOT")
    common(p)
    p.add_argument("--route", action="append", help="comma-separated vertices to highlight (repeatable)")
    p.set_defaults(fn=_cmd_export_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CommandError as exc:
        print(f"routespace: {exc}", file=sys.stderr)
        return exc.code
    except (ParseError, ValidationError, InputError, UnknownOutcomeError) as exc:
        print(f"routespace: {exc}", file=sys.stderr)
        return 2
    except (InfeasibleError, NoFeasibleRouteError, EmptySynthesisError) as exc:
        print(f"routespace: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"routespace: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
