"""File formats: JSON documents for spaces, structures, scenarios and schemes.

One envelope, four kinds: {"schema_version": 1, "kind": "space" | "morph" |
"scenario" | "scheme", ...}.  Rationals serialize as integers or "p/q"
strings, never binary floats, so parsed documents reproduce exact values.
Documents may declare named compatibility tables once under "tables" and
reference them by name wherever a table is expected.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .model import (
    Alternatives,
    AlternativeRef,
    Arc,
    CriterionSpec,
    DesignSpace,
    Hierarchy,
    Plain,
    Sense,
    TwoComponent,
    Vertex,
    as_rational,
    make_space,
    validate_space,
)
from .morphology import (
    CompatibilityTable,
    CompositePart,
    DesignAlternative,
    LeafPart,
    MorphStructure,
    Part,
    validate_structure,
)
from .trajectory import Scenario, Stage
from .treatment import (
    AnalysisPoint,
    DesignPoint,
    OutcomeScript,
    Rule,
    RuleSet,
    TreatmentScheme,
    validate_scheme,
)

SCHEMA_VERSION = 1


class ParseError(ValueError):
    """The document cannot be read at all (bad JSON, wrong shape)."""


class ValidationError(ValueError):
    """The document parses but violates the model invariants."""

    def __init__(self, violations):
        self.violations = [str(v) for v in violations]
        super().__init__("; ".join(self.violations))


def _fail(path: str, message: str):
    raise ParseError(f"{path}: {message}")


def _expect(doc, path: str, typ, what: str):
    if not isinstance(doc, typ):
        _fail(path, f"expected {what}, got {type(doc).__name__}")
    return doc


def _get(doc: Mapping, path: str, key: str, typ, what: str, default=_fail):
    if key not in doc:
        if default is _fail:
            _fail(path, f"missing field {key!r}")
        return default
    return _expect(doc[key], f"{path}.{key}", typ, what)


def _rational(value, path: str) -> Fraction:
    if isinstance(value, float):
        _fail(path, "binary floats are not accepted; use an integer or a 'p/q' string")
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        _fail(path, f"expected a rational (int or string), got {type(value).__name__}")
    try:
        return as_rational(value)
    except ValueError:
        _fail(path, f"not a rational literal: {value!r}")


def rational_to_json(value: Fraction) -> int | str:
    if value.denominator == 1:
        return int(value)
    return f"{value.numerator}/{value.denominator}"


def _weight_to_json(weight):
    if isinstance(weight, tuple):
        return [rational_to_json(w) for w in weight]
    return rational_to_json(weight)


# --------------------------------------------------------------------------
# compatibility tables

def _parse_table(raw, path: str, tables: Mapping[str, CompatibilityTable], scale_max: int) -> CompatibilityTable:
    if isinstance(raw, str):
        if raw not in tables:
            _fail(path, f"unknown shared table {raw!r}")
        return tables[raw]
    entries = _expect(raw, path, list, "a list of [a, b, w] triples or a table name")
    triples = []
    for i, entry in enumerate(entries):
        item = _expect(entry, f"{path}[{i}]", list, "a [a, b, w] triple")
        if len(item) != 3:
            _fail(f"{path}[{i}]", f"expected 3 elements, got {len(item)}")
        a = _expect(item[0], f"{path}[{i}][0]", str, "a member id")
        b = _expect(item[1], f"{path}[{i}][1]", str, "a member id")
        w = _expect(item[2], f"{path}[{i}][2]", int, "an integer 0..scale_max")
        triples.append((a, b, w))
    try:
        return CompatibilityTable.build(triples, scale_max)
    except ValueError as exc:
        _fail(path, str(exc))


def _table_to_json(table: CompatibilityTable) -> list:
    return [[a, b, w] for (a, b), w in sorted(table.pairs.items())]


def _parse_shared_tables(doc: Mapping, path: str, scale_max: int) -> dict[str, CompatibilityTable]:
    raw = _get(doc, path, "tables", dict, "an object of named tables", default={})
    return {
        name: _parse_table(entries, f"{path}.tables.{name}", {}, scale_max)
        for name, entries in raw.items()
    }


# --------------------------------------------------------------------------
# morphological structures

def _parse_part(raw, path: str, tables: Mapping[str, CompatibilityTable], scale_max: int) -> Part:
    node = _expect(raw, path, dict, "a part object")
    part_id = _get(node, path, "id", str, "a part id")
    if "alternatives" in node:
        alts = []
        for i, entry in enumerate(_get(node, path, "alternatives", list, "a list")):
            pair = _expect(entry, f"{path}.alternatives[{i}]", list, "an [id, priority] pair")
            if len(pair) != 2:
                _fail(f"{path}.alternatives[{i}]", "expected [id, priority]")
            alts.append(DesignAlternative(
                _expect(pair[0], f"{path}.alternatives[{i}][0]", str, "an id"),
                part_id,
                _expect(pair[1], f"{path}.alternatives[{i}][1]", int, "a priority"),
            ))
        return LeafPart(part_id, tuple(alts))
    if "children" not in node:
        _fail(path, "a part needs either 'alternatives' or 'children'")
    children = tuple(
        _parse_part(child, f"{path}.children[{i}]", tables, scale_max)
        for i, child in enumerate(node["children"])
    )
    table = CompatibilityTable({}, scale_max)
    if "compatibility" in node:
        table = _parse_table(node["compatibility"], f"{path}.compatibility", tables, scale_max)
    labels = None
    if "labels" in node:
        labels = tuple(
            _expect(x, f"{path}.labels[{i}]", str, "a label")
            for i, x in enumerate(_get(node, path, "labels", list, "a list"))
        )
    repricing = {}
    for key, value in _get(node, path, "repricing", dict, "an object", default={}).items():
        repricing[key] = _expect(value, f"{path}.repricing.{key}", int, "a priority")
    return CompositePart(part_id, children, table, labels, repricing)


def _part_to_json(part: Part) -> dict:
    if isinstance(part, LeafPart):
        return {
            "id": part.id,
            "alternatives": [[da.id, da.priority] for da in part.alternatives],
        }
    out: dict[str, Any] = {
        "id": part.id,
        "children": [_part_to_json(child) for child in part.children],
    }
    if part.table.pairs:
        out["compatibility"] = _table_to_json(part.table)
    if part.labels is not None:
        out["labels"] = list(part.labels)
    if part.repricing:
        out["repricing"] = dict(sorted(part.repricing.items()))
    return out


def morph_from_doc(doc: Mapping, path: str = "$") -> MorphStructure:
    k = _get(doc, path, "k", int, "an integer", default=3)
    scale_max = _get(doc, path, "scale_max", int, "an integer", default=3)
    tables = _parse_shared_tables(doc, path, scale_max)
    root = _parse_part(_get(doc, path, "root", dict, "a part object"), f"{path}.root", tables, scale_max)
    structure = MorphStructure(root, k, scale_max)
    problems = validate_structure(structure)
    if problems:
        raise ValidationError(problems)
    return structure


def morph_to_doc(structure: MorphStructure) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "morph",
        "k": structure.k,
        "scale_max": structure.scale_max,
        "root": _part_to_json(structure.root),
    }


# --------------------------------------------------------------------------
# design spaces

_SENSES = {"maximize": Sense.MAX, "minimize": Sense.MIN}


def space_from_doc(doc: Mapping, path: str = "$") -> DesignSpace:
    criteria = []
    for i, entry in enumerate(_get(doc, path, "criteria", list, "a list", default=[])):
        spec = _expect(entry, f"{path}.criteria[{i}]", dict, "a criterion object")
        name = _get(spec, f"{path}.criteria[{i}]", "name", str, "a name")
        sense = _get(spec, f"{path}.criteria[{i}]", "sense", str, "maximize|minimize")
        if sense not in _SENSES:
            _fail(f"{path}.criteria[{i}].sense", f"unknown sense {sense!r}")
        criteria.append(CriterionSpec(name, _SENSES[sense]))

    structures = {
        name: morph_from_doc(raw, f"{path}.structures.{name}")
        for name, raw in _get(doc, path, "structures", dict, "an object", default={}).items()
    }
    rule_sets = {
        name: _parse_rules(raw, f"{path}.rule_sets.{name}", name)
        for name, raw in _get(doc, path, "rule_sets", dict, "an object", default={}).items()
    }

    vertices = []
    for i, entry in enumerate(_get(doc, path, "vertices", list, "a list")):
        vpath = f"{path}.vertices[{i}]"
        node = _expect(entry, vpath, dict, "a vertex object")
        vid = _get(node, vpath, "id", str, "an id")
        profit = tuple(
            _rational(x, f"{vpath}.profit[{j}]")
            for j, x in enumerate(_get(node, vpath, "profit", list, "a list", default=[]))
        )
        duration = _rational(node.get("duration", 0), f"{vpath}.duration")
        labels = frozenset(
            _expect(x, f"{vpath}.labels[{j}]", str, "a label")
            for j, x in enumerate(_get(node, vpath, "labels", list, "a list", default=[]))
        )
        kind_raw = _get(node, vpath, "kind", dict, "a kind object", default={"type": "plain"})
        kind_type = _get(kind_raw, f"{vpath}.kind", "type", str, "a kind name")
        if kind_type == "plain":
            kind = Plain()
        elif kind_type == "alternatives":
            options = []
            for j, pair in enumerate(_get(kind_raw, f"{vpath}.kind", "options", list, "a list")):
                item = _expect(pair, f"{vpath}.kind.options[{j}]", list, "an [id, priority] pair")
                if len(item) != 2:
                    _fail(f"{vpath}.kind.options[{j}]", "expected [id, priority]")
                options.append(AlternativeRef(item[0], item[1]))
            kind = Alternatives(tuple(options))
        elif kind_type == "hierarchy":
            ref = _get(kind_raw, f"{vpath}.kind", "structure", str, "a structure name")
            if ref not in structures:
                _fail(f"{vpath}.kind.structure", f"unknown structure {ref!r}")
            kind = Hierarchy(structures[ref])
        elif kind_type == "two_component":
            design_ref = _get(kind_raw, f"{vpath}.kind", "design", str, "a structure name")
            rules_ref = _get(kind_raw, f"{vpath}.kind", "analysis", str, "a rule set name")
            if design_ref not in structures:
                _fail(f"{vpath}.kind.design", f"unknown structure {design_ref!r}")
            if rules_ref not in rule_sets:
                _fail(f"{vpath}.kind.analysis", f"unknown rule set {rules_ref!r}")
            kind = TwoComponent(structures[design_ref], rule_sets[rules_ref])
        else:
            _fail(f"{vpath}.kind.type", f"unknown vertex kind {kind_type!r}")
        vertices.append(Vertex(vid, kind, profit, duration, labels))

    arcs = []
    for i, entry in enumerate(_get(doc, path, "arcs", list, "a list")):
        apath = f"{path}.arcs[{i}]"
        node = _expect(entry, apath, dict, "an arc object")
        raw_weight = node.get("weight", 0)
        if isinstance(raw_weight, list):
            weight = tuple(_rational(x, f"{apath}.weight[{j}]") for j, x in enumerate(raw_weight))
        else:
            weight = _rational(raw_weight, f"{apath}.weight")
        arcs.append(Arc(_get(node, apath, "tail", str, "an id"), _get(node, apath, "head", str, "an id"), weight))

    origins = _get(doc, path, "origins", list, "a list")
    goals = _get(doc, path, "goals", list, "a list")
    space = make_space(vertices, arcs, origins, goals, criteria)
    problems = validate_space(space)
    if problems:
        raise ValidationError(problems)
    return space


def space_to_doc(space: DesignSpace) -> dict:
    structures: dict[str, dict] = {}
    rule_sets: dict[str, dict] = {}
    vertices = []
    for v in space.vertices:
        node: dict[str, Any] = {"id": v.id}
        if v.profit:
            node["profit"] = [rational_to_json(x) for x in v.profit]
        if v.duration:
            node["duration"] = rational_to_json(v.duration)
        if v.labels:
            node["labels"] = sorted(v.labels)
        if isinstance(v.kind, Alternatives):
            node["kind"] = {
                "type": "alternatives",
                "options": [[o.id, o.priority] for o in v.kind.options],
            }
        elif isinstance(v.kind, Hierarchy):
            name = f"structure_{v.id}"
            structures[name] = {
                "k": v.kind.structure.k,
                "scale_max": v.kind.structure.scale_max,
                "root": _part_to_json(v.kind.structure.root),
            }
            node["kind"] = {"type": "hierarchy", "structure": name}
        elif isinstance(v.kind, TwoComponent):
            name = f"structure_{v.id}"
            rules_name = f"rules_{v.id}"
            structures[name] = {
                "k": v.kind.design.k,
                "scale_max": v.kind.design.scale_max,
                "root": _part_to_json(v.kind.design.root),
            }
            rule_sets[rules_name] = _rules_to_json(v.kind.analysis)
            node["kind"] = {"type": "two_component", "design": name, "analysis": rules_name}
        vertices.append(node)
    doc: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "kind": "space",
        "criteria": [{"name": c.name, "sense": c.sense.value} for c in space.criteria],
        "vertices": vertices,
        "arcs": [
            {"tail": a.tail, "head": a.head, "weight": _weight_to_json(a.weight)}
            for a in space.arcs
        ],
        "origins": sorted(space.origins),
        "goals": sorted(space.goals),
    }
    if structures:
        doc["structures"] = structures
    if rule_sets:
        doc["rule_sets"] = rule_sets
    return doc


# --------------------------------------------------------------------------
# scenarios

def scenario_from_doc(doc: Mapping, path: str = "$") -> Scenario:
    k = _get(doc, path, "k", int, "an integer", default=3)
    scale_max = _get(doc, path, "scale_max", int, "an integer", default=3)
    tables = _parse_shared_tables(doc, path, scale_max)
    stages = []
    for i, entry in enumerate(_get(doc, path, "stages", list, "a list")):
        spath = f"{path}.stages[{i}]"
        node = _expect(entry, spath, dict, "a stage object")
        stage_id = _get(node, spath, "id", str, "an id")
        root = _parse_part(_get(node, spath, "structure", dict, "a part object"), f"{spath}.structure", tables, scale_max)
        structure = MorphStructure(root, k, scale_max)
        problems = validate_structure(structure)
        if problems:
            raise ValidationError([f"{spath}: {p}" for p in problems])
        priorities = {
            key: _expect(value, f"{spath}.priorities.{key}", int, "a priority")
            for key, value in _get(node, spath, "priorities", dict, "an object", default={}).items()
        }
        stages.append(Stage(stage_id, structure, priorities))
    links = []
    for i, entry in enumerate(_get(doc, path, "links", list, "a list", default=[])):
        lpath = f"{path}.links[{i}]"
        node = _expect(entry, lpath, dict, "a link object")
        links.append(_parse_table(node.get("pairs", []), f"{lpath}.pairs", tables, scale_max))
    try:
        return Scenario(tuple(stages), tuple(links), k, scale_max)
    except ValueError as exc:
        raise ValidationError([str(exc)])


def scenario_to_doc(scenario: Scenario) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scenario",
        "k": scenario.k,
        "scale_max": scenario.scale_max,
        "stages": [
            {
                "id": st.id,
                "structure": _part_to_json(st.structure.root),
                **({"priorities": dict(sorted(st.priorities.items()))} if st.priorities else {}),
            }
            for st in scenario.stages
        ],
        "links": [{"pairs": _table_to_json(t)} for t in scenario.links],
    }


# --------------------------------------------------------------------------
# treatment schemes

def _parse_rules(raw, path: str, point: str) -> RuleSet:
    rules = []
    for i, entry in enumerate(_expect(raw, path, list, "a list of rules")):
        node = _expect(entry, f"{path}[{i}]", dict, "a rule object")
        rules.append(Rule(
            _get(node, f"{path}[{i}]", "outcome", str, "an outcome label"),
            _get(node, f"{path}[{i}]", "target", str, "a target id"),
        ))
    return RuleSet(point, tuple(rules))


def _rules_to_json(rules: RuleSet) -> list:
    return [{"outcome": r.outcome, "target": r.target} for r in rules.rules]


def scheme_from_doc(doc: Mapping, path: str = "$") -> TreatmentScheme:
    k = _get(doc, path, "k", int, "an integer", default=3)
    scale_max = _get(doc, path, "scale_max", int, "an integer", default=3)
    tables = _parse_shared_tables(doc, path, scale_max)
    end = _get(doc, path, "end", str, "an id", default="End")
    initial = _get(doc, path, "initial", str, "an id")
    design_points = []
    for i, entry in enumerate(_get(doc, path, "design_points", list, "a list")):
        dpath = f"{path}.design_points[{i}]"
        node = _expect(entry, dpath, dict, "a design point object")
        pid = _get(node, dpath, "id", str, "an id")
        root = _parse_part(_get(node, dpath, "structure", dict, "a part object"), f"{dpath}.structure", tables, scale_max)
        structure = MorphStructure(root, k, scale_max)
        problems = validate_structure(structure)
        if problems:
            raise ValidationError([f"{dpath}: {p}" for p in problems])
        design_points.append(DesignPoint(pid, structure, _get(node, dpath, "successor", str, "an id")))
    analysis_points = []
    for i, entry in enumerate(_get(doc, path, "analysis_points", list, "a list", default=[])):
        apath = f"{path}.analysis_points[{i}]"
        node = _expect(entry, apath, dict, "an analysis point object")
        pid = _get(node, apath, "id", str, "an id")
        analysis_points.append(AnalysisPoint(pid, _parse_rules(node.get("rules", []), f"{apath}.rules", pid)))
    scheme = TreatmentScheme(tuple(design_points), tuple(analysis_points), initial, end)
    problems = validate_scheme(scheme)
    if problems:
        raise ValidationError(problems)
    return scheme


def scheme_to_doc(scheme: TreatmentScheme) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scheme",
        "initial": scheme.initial,
        "end": scheme.end,
        "k": scheme.design_points[0].structure.k if scheme.design_points else 3,
        "scale_max": scheme.design_points[0].structure.scale_max if scheme.design_points else 3,
        "design_points": [
            {"id": p.id, "successor": p.successor, "structure": _part_to_json(p.structure.root)}
            for p in scheme.design_points
        ],
        "analysis_points": [
            {"id": p.id, "rules": _rules_to_json(p.rules)}
            for p in scheme.analysis_points
        ],
    }


# --------------------------------------------------------------------------
# entry points

_PARSERS = {
    "space": space_from_doc,
    "morph": morph_from_doc,
    "scenario": scenario_from_doc,
    "scheme": scheme_from_doc,
}

_SERIALIZERS = {
    DesignSpace: space_to_doc,
    MorphStructure: morph_to_doc,
    Scenario: scenario_to_doc,
    TreatmentScheme: scheme_to_doc,
}


def parse_document(text: str, source: str = "<string>"):
    """Typed value from document text; the declared kind picks the type."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    doc = _expect(doc, "$", dict, "a document object")
    version = _get(doc, "$", "schema_version", int, "an integer", default=SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        _fail("$.schema_version", f"unsupported version {version}")
    kind = _get(doc, "$", "kind", str, "a document kind")
    if kind not in _PARSERS:
        _fail("$.kind", f"unknown kind {kind!r}; expected one of {sorted(_PARSERS)}")
    return _PARSERS[kind](doc)


def parse_space_file(path: str | Path):
    """Parse one document file into its typed value."""
    return parse_document(Path(path).read_text(encoding="utf-8"), str(path))


def serialize(value) -> dict:
    for typ, to_doc in _SERIALIZERS.items():
        if isinstance(value, typ):
            return to_doc(value)
    raise TypeError(f"cannot serialize {type(value).__name__}")


def dumps(value) -> str:
    return json.dumps(serialize(value), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_script_file(path: str | Path) -> tuple[OutcomeScript, dict[str, list[str]]]:
    """Outcome script document: observed labels plus optional per-point
    composite picks ({"outcomes": [...], "selections": {point: [labels]}})."""
    source = str(path)
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    doc = _expect(doc, "$", dict, "a script object")
    outcomes = [
        _expect(x, f"$.outcomes[{i}]", str, "an outcome label")
        for i, x in enumerate(_get(doc, "$", "outcomes", list, "a list"))
    ]
    selections = {}
    for point, labels in _get(doc, "$", "selections", dict, "an object", default={}).items():
        selections[point] = [
            _expect(x, f"$.selections.{point}[{i}]", str, "a composite label")
            for i, x in enumerate(_expect(labels, f"$.selections.{point}", list, "a list"))
        ]
    return OutcomeScript(tuple(outcomes)), selections
