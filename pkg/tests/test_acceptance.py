"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Every tolerance is exact; the time limits are asserted.
"""

import functools
import io
import itertools
import random
import time
from contextlib import redirect_stdout
from fractions import Fraction

import pytest

from routespace import (
    CompatibilityTable,
    InfeasibleError,
    MorphStructure,
    OrienteeringInstance,
    SystemQuality,
    criterion as make_criterion,
    dominates,
    multicriteria_shortest,
    orienteering_exact,
    pareto_filter,
    quality_dominates,
    route_aggregates,
    strategy1_global_route,
    strategy2_solve,
    synthesize_hierarchical,
    synthesize_part,
    extend_digraph,
    DesignAlternative,
    Alternatives,
)
from routespace.cli import main as cli_main
from routespace.documents import parse_script_file
from routespace.presets import (
    REFERENCE_ROUTES,
    audit_reference_routes,
    data_path,
    edu_pipeline,
    example3_route,
    individual_script_path,
    load,
    load_scenario,
    load_space,
    medical_pipeline,
    point_composites,
    startup_pipeline,
)

from oracles import (
    brute_morph,
    brute_orienteering,
    brute_pareto_paths,
    naive_quality_dominates,
    random_dag,
    random_morphology,
    random_orienteering_space,
    random_quality,
    random_routable_space,
    random_vector_set,
)


def F(x):
    return Fraction(x)


def criterion(number, limit_seconds, description):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            failure = None
            try:
                fn(*args, **kwargs)
            except BaseException as exc:  # report, then re-raise
                failure = exc
            elapsed = time.perf_counter() - start
            status = "PASS" if failure is None and elapsed < limit_seconds else "FAIL"
            print(f"criterion {number:2d} {status} ({elapsed:6.2f}s / {limit_seconds}s)  {description}")
            if failure is not None:
                raise failure
            assert elapsed < limit_seconds, f"criterion {number} exceeded {limit_seconds}s"
        return wrapper
    return deco


QUALITY_330 = SystemQuality(3, (3, 0, 0))
QUALITY_320 = SystemQuality(3, (2, 0, 0))


@criterion(1, 1.0, "hierarchical synthesis of the basic plan model")
def test_criterion_01_basic_plan_synthesis():
    structure = load("medical_structure.json")
    subtrees = {child.id: child for child in structure.root.children}
    locals_ = {
        node_id: synthesize_hierarchical(MorphStructure(subtrees[node_id], structure.k, structure.scale_max))
        for node_id in ("X", "Y", "Z")
    }
    assert [(c.label, c.choice, c.quality) for c in locals_["X"]] == [
        ("X1", {"J": "J1", "M": "M1"}, QUALITY_320),
        ("X2", {"J": "J1", "M": "M2"}, QUALITY_320),
        ("X3", {"J": "J3", "M": "M1"}, QUALITY_320),
        ("X4", {"J": "J3", "M": "M2"}, QUALITY_320),
    ]
    assert [(c.label, c.choice, c.quality) for c in locals_["Y"]] == [
        ("Y1", {"P": "P0", "H": "H2", "G": "G1"}, QUALITY_330),
        ("Y2", {"P": "P0", "H": "H3", "G": "G1"}, QUALITY_330),
    ]
    assert [(c.label, c.choice, c.quality) for c in locals_["Z"]] == [
        ("Z1", {"O": "O2", "K": "K1"}, QUALITY_320),
    ]
    composites = synthesize_hierarchical(structure)
    assert [(c.label, c.components, c.quality) for c in composites] == [
        ("S_mu0_1", ("X1", "Y1", "Z1"), QUALITY_330),
        ("S_mu0_2", ("X2", "Y1", "Z1"), QUALITY_330),
        ("S_mu0_3", ("X3", "Y1", "Z1"), QUALITY_330),
        ("S_mu0_4", ("X4", "Y1", "Z1"), QUALITY_330),
    ]


@criterion(2, 1.0, "per-point treatment synthesis")
def test_criterion_02_treatment_points():
    sets = point_composites()
    assert [(c.label, c.choice, c.quality) for c in sets["mu1"]] == [
        ("S_mu1_1", {"P": "P0", "H": "H2", "G": "G1"}, QUALITY_330),
        ("S_mu1_2", {"P": "P0", "H": "H3", "G": "G1"}, QUALITY_330),
    ]
    assert [(c.label, c.choice) for c in sets["mu2"]] == [
        ("S_mu2_1", {"O": "O4", "K": "K1"}),
        ("S_mu2_2", {"O": "O4", "K": "K3"}),
    ]
    assert [(c.label, c.choice) for c in sets["mu3"]] == [
        ("S_mu3_1", {"J": "J3"}),
        ("S_mu3_2", {"J": "J4"}),
    ]
    assert [(c.label, c.choice) for c in sets["mu4"]] == [
        ("S_mu4_1", {"J": "J3", "M": "M1"}),
        ("S_mu4_2", {"J": "J4", "M": "M1"}),
    ]


@criterion(3, 1.0, "individual treatment walk and loop guard")
def test_criterion_03_treatment_walk():
    script, selections = parse_script_file(individual_script_path())
    result = medical_pipeline(script, selections)
    assert result.completed
    assert [c.label for c in result.composites] == ["S_mu0_3", "S_mu0_1", "S_mu4_2", "S_mu2_1"]
    looped = medical_pipeline(itertools.repeat("repetition"), None)
    assert not looped.completed
    assert looped.truncation.reason == "visit-bound"
    assert [s.point for s in looped.steps] == ["mu0"] * 3


@criterion(4, 1.0, "start-up stage sets and development trajectory")
def test_criterion_04_startup():
    scenario = load_scenario()
    result = startup_pipeline(scenario)
    labels = [
        [c.label for c in composites]
        for composites in result.stage_sets
    ]
    assert labels == [["S1_1"], ["S2_1", "S2_2"], ["S3_1", "S3_2"]]
    assert [
        [c.label for c in t.composites] for t in result.trajectories
    ] == [["S1_1", "S2_1", "S3_1"]]


@criterion(5, 1.0, "reference-route aggregates and discrepancy audit")
def test_criterion_05_reference_audit():
    space = load_space()
    profit, duration, cost = route_aggregates(space, ("a1", "b3", "h3", "p1"))
    assert (profit, duration, cost) == ((F(10), F(15), F(15)), F(8), F(7))
    profit, duration, cost = route_aggregates(space, ("a1", "b1", "g1", "h3", "p1"))
    assert (profit, duration, cost) == ((F(15), F(17), F(19)), F(9), F(5))
    records = [
        (r.route_id, r.field, r.reference_value, r.recomputed_value)
        for r in audit_reference_routes(space)
    ]
    assert records == [
        ("L3_1", "theta1", F(15), F(17)),
        ("L4_1", "d", F(6), F(7)),
        ("L4_2", "d", F(6), F(8)),
        ("L4_3", "theta2", F(22), F(24)),
    ]


@criterion(6, 1.0, "educational pipeline tie classes and selection ranks")
def test_criterion_06_edu_pipeline():
    space = load_space()
    result = edu_pipeline(space)
    reports = {r.template.id: r for r in result.templates}
    for route_id, vertices, _, selected in REFERENCE_ROUTES:
        template_id = "L" + route_id[1]
        _, _, cost = route_aggregates(space, vertices)
        tie_class = next(tc for tc in reports[template_id].tie_classes if tc.cost == cost)
        member = next(m for m in tie_class.members if m.route.vertices == vertices)
        if selected:
            assert member.pareto_rank == 1, route_id


@criterion(7, 30.0, "exact orienteering equals brute force on 100 instances")
def test_criterion_07_orienteering_oracle():
    rng = random.Random(2024)
    for i in range(100):
        space, start, end, budget = random_orienteering_space(rng)
        inst = OrienteeringInstance(space, start, end, budget=budget)
        expected = brute_orienteering(space, start, end, budget)
        if expected is None:
            with pytest.raises(InfeasibleError):
                orienteering_exact(inst)
        else:
            route, score = orienteering_exact(inst)
            assert (score, route.cost, route.vertices) == expected, f"instance {i}"


@criterion(8, 30.0, "multicriteria search equals enumeration on 50 DAGs")
def test_criterion_08_multicriteria_oracle():
    rng = random.Random(4096)
    for i in range(50):
        space, start, end = random_dag(rng)
        got = {r.cost for r in multicriteria_shortest(space, start, end)}
        assert got == brute_pareto_paths(space, start, end), f"instance {i}"


@criterion(9, 60.0, "property suites over dominance, synthesis and extension")
def test_criterion_09_property_suites():
    rng = random.Random(99)
    # non-dominated filtering: idempotent antichain, 1000 random vector sets
    for _ in range(1000):
        items, senses = random_vector_set(rng)
        crits = tuple(
            make_criterion(f"c{i}", "maximize" if s == "+" else "minimize")
            for i, s in enumerate(senses)
        )
        front = pareto_filter(items, crits)
        assert pareto_filter(front, crits) == front
        for a in front:
            for b in front:
                assert not dominates(a, b, crits)
    # composite quality order: irreflexive, transitive, matches the naive reading
    for _ in range(1000):
        qs = [random_quality(rng) for _ in range(3)]
        wrapped = [SystemQuality(w, c) for w, c in qs]
        for q, wq in zip(qs, wrapped):
            assert not quality_dominates(wq, wq)
            for q2, wq2 in zip(qs, wrapped):
                assert quality_dominates(wq, wq2) == naive_quality_dominates(q, q2)
        a, b, c = wrapped
        if quality_dominates(a, b) and quality_dominates(b, c):
            assert quality_dominates(a, c)
    # part synthesis equals exhaustive composition on 100 random morphologies
    for _ in range(100):
        pools, pair_value = random_morphology(rng)
        offers = [
            (f"p{i}", [DesignAlternative(d, f"p{i}", pr) for d, pr in pool])
            for i, pool in enumerate(pools)
        ]
        entries = []
        for i, pool in enumerate(pools):
            for j, other in enumerate(pools):
                if i < j:
                    for a, _ in pool:
                        for b, _ in other:
                            entries.append((a, b, pair_value(a, b)))
        table = CompatibilityTable.build(entries)
        combos = synthesize_part(offers, table, 3, 3)
        assert {tuple(da.id for da in combo) for combo, _ in combos} == brute_morph(
            pools, pair_value, 3, 3
        )
    # extension counting identity on 100 random spaces
    for _ in range(100):
        space, _, _ = random_routable_space(rng, with_alternatives=True)
        ext = extend_digraph(space)
        per_vertex = {
            v.id: len(v.kind.options) if isinstance(v.kind, Alternatives) else 1
            for v in space.vertices
        }
        assert len(ext.vertices) == sum(per_vertex.values())
        assert len(ext.arcs) == sum(per_vertex[a.tail] * per_vertex[a.head] for a in space.arcs)


@criterion(10, 10.0, "strategy agreement and the extension demo route")
def test_criterion_10_strategies():
    resolved = example3_route()
    assert resolved.route.vertices == ("mu1", "mu2", "mu3", "mu5")
    assert dict(resolved.choice) == {
        "mu1": "mu1.a1",
        "mu2": "mu2.a3",
        "mu3": "mu3.a1",
        "mu5": "mu5.a2",
    }
    rng = random.Random(77)
    for i in range(50):
        space, start, end = random_routable_space(rng, with_alternatives=True)
        s1 = strategy1_global_route(space, start, end)
        s2 = strategy2_solve(space)
        assert s1.route.vertices == s2.route.vertices, f"instance {i}"


CLI_INVOCATIONS = (
    ["solve-sp", "--input", str(data_path("educational_space.json")), "--origin", "a1", "--goal", "p1"],
    ["solve-ksp", "--input", str(data_path("educational_space.json")), "--k", "3", "--origin", "a1", "--goal", "p1"],
    ["solve-mc-sp", "--input", str(data_path("mc_demo_space.json"))],
    ["orienteer", "--input", str(data_path("orienteering_demo_space.json")), "--budget", "4"],
    ["orienteer", "--input", str(data_path("educational_space.json")), "--arc-cap", "5", "--time-cap", "12"],
    ["synthesize", "--input", str(data_path("medical_structure.json"))],
    ["plan-stages", "--input", str(data_path("startup_scenario.json"))],
    ["plan-treatment"],
    ["edu"],
    ["edu", "--audit"],
    ["startup"],
    ["export-dot", "--input", str(data_path("medical_scheme.json"))],
)


@criterion(11, 10.0, "byte-identical CLI reports across consecutive runs")
def test_criterion_11_cli_determinism():
    for argv in CLI_INVOCATIONS:
        outputs = []
        for _ in range(2):
            buffer = io.StringIO()
            with redirect_stdout(buffer):
                code = cli_main(list(argv))
            assert code == 0, argv
            outputs.append(buffer.getvalue().encode("utf-8"))
        assert outputs[0] == outputs[1], argv
        assert outputs[0], argv
