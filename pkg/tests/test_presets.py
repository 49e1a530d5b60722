"""Bundled datasets: educational pipeline, audit, start-up, demo spaces."""

import itertools
from fractions import Fraction

from routespace import SystemQuality, route_aggregates, validate_space
from routespace.presets import (
    DEFAULT_ARC_CAP,
    DEFAULT_TIME_CAP,
    REFERENCE_ROUTES,
    TEMPLATES,
    audit_reference_routes,
    edu_pipeline,
    load_scenario,
    load_space,
    startup_pipeline,
    template_routes,
)

from oracles import naive_front


def F(x):
    return Fraction(x)


def template_oracle(space, template):
    """Independent enumeration of template-shaped routes with their costs."""
    members = {}
    for v in space.vertices:
        for tag in v.labels:
            if tag.startswith("class="):
                members.setdefault(tag.split("=", 1)[1], []).append(v.id)
    pools = [sorted(members[c]) for c in template.classes]
    routes = {}
    for combo in itertools.product(*pools):
        total = F(0)
        ok = True
        for a, b in zip(combo, combo[1:]):
            arc = space.arc_map.get((a, b))
            if arc is None:
                ok = False
                break
            total += arc.weight
        if ok:
            routes[combo] = total
    return routes


class TestEducationalData:
    def test_space_statistics(self):
        space = load_space()
        assert len(space.vertices) == 24
        assert len(space.arcs) == 121
        assert validate_space(space) == []
        assert space.origins == {"a1"}
        assert space.goals == {"p1"}

    def test_zero_weight_arc_is_present(self):
        # one inter-degree movement is costless in the raw tables
        space = load_space()
        assert space.arc_map[("h7", "f2")].weight == F(0)

    def test_template_classes_partition_vertex_families(self):
        space = load_space()
        families = {v.id[0] for v in space.vertices}
        for template in TEMPLATES:
            assert set(template.classes) <= families
            for left, right in zip(template.classes, template.classes[1:]):
                connected = any(
                    a.tail.startswith(left) and a.head.startswith(right)
                    for a in space.arcs
                )
                assert connected, (template.id, left, right)


class TestStageOne:
    def test_min_cost_classes_per_template(self):
        # frozen from the exhaustive template-route oracle over the raw tables
        space = load_space()
        by_template = {}
        for template in TEMPLATES:
            oracle = template_oracle(space, template)
            minimum = min(oracle.values())
            by_template[template.id] = (
                minimum,
                sorted(route for route, d in oracle.items() if d == minimum),
            )
        assert by_template["L1"] == (F(6), [("a1", "b1", "h3", "p1")])
        assert by_template["L2"] == (F(5), [("a1", "b1", "g1", "h3", "p1")])
        assert by_template["L3"] == (
            F(5),
            [("a1", "b1", "h1", "f1", "p1"), ("a1", "b2", "h2", "f1", "p1")],
        )
        assert by_template["L4"] == (
            F(5),
            [("a1", "b1", "g1", "h7", "f2", "p1"), ("a1", "b1", "g3", "h7", "f2", "p1")],
        )

    def test_pipeline_winners_match_oracle(self):
        space = load_space()
        result = edu_pipeline(space)
        for report in result.templates:
            oracle = template_oracle(space, report.template)
            minimum = min(oracle.values())
            assert {r.vertices for r in report.winners} == {
                route for route, d in oracle.items() if d == minimum
            }
            # tie classes cover every admissible route exactly once, ascending
            covered = [m.route.vertices for tc in report.tie_classes for m in tc.members]
            assert sorted(covered) == sorted(oracle)
            assert [tc.cost for tc in report.tie_classes] == sorted({d for d in oracle.values()})

    def test_template_route_enumeration_matches_helper(self):
        space = load_space()
        for template in TEMPLATES:
            helper = {r.vertices for r in template_routes(space, template)}
            assert helper == set(template_oracle(space, template))


class TestStageTwo:
    def test_pool_respects_both_caps_and_is_antichain(self):
        space = load_space()
        result = edu_pipeline(space)
        assert result.arc_cap == DEFAULT_ARC_CAP
        assert result.time_cap == DEFAULT_TIME_CAP
        for _, route in result.pool:
            assert route.duration <= result.time_cap
            for a, b in zip(route.vertices, route.vertices[1:]):
                assert space.arc_map[(a, b)].weight <= result.arc_cap
        vectors = [r.profit + (r.cost,) for _, r in result.pareto]
        front = naive_front(vectors, "+++-")
        assert sorted(front) == list(range(len(vectors)))

    def test_infeasible_template_is_flagged_not_fatal(self):
        space = load_space()
        from routespace.presets import GeneralizedTemplate

        bogus = GeneralizedTemplate("LX", ("a", "f"))  # no a->f arcs exist
        result = edu_pipeline(space, templates=TEMPLATES + (bogus,))
        report = {r.template.id: r for r in result.templates}["LX"]
        assert not report.feasible
        assert report.winners == ()
        assert len(result.templates) == 5


class TestAudit:
    def test_rows_one_and_two_match_exactly(self):
        records = audit_reference_routes()
        assert not any(r.route_id in ("L1_1", "L2_1") for r in records)

    def test_exactly_four_discrepancies(self):
        records = audit_reference_routes()
        got = [(r.route_id, r.field, r.reference_value, r.recomputed_value) for r in records]
        assert got == [
            ("L3_1", "theta1", F(15), F(17)),
            ("L4_1", "d", F(6), F(7)),
            ("L4_2", "d", F(6), F(8)),
            ("L4_3", "theta2", F(22), F(24)),
        ]

    def test_matches_independent_recomputation(self):
        space = load_space()
        records = {(r.route_id, r.field) for r in audit_reference_routes(space)}
        for route_id, vertices, printed, _ in REFERENCE_ROUTES:
            profit, duration, cost = route_aggregates(space, vertices)
            recomputed = dict(zip(("theta1", "theta2", "theta3"), profit))
            recomputed["tau"] = duration
            recomputed["d"] = cost
            for field, value in printed.items():
                mismatched = recomputed[field] != F(value)
                assert ((route_id, field) in records) == mismatched


class TestStartup:
    def test_stage_sets(self):
        scenario = load_scenario()
        result = startup_pipeline(scenario)
        sets = {
            stage.id: [(c.label, c.components) for c in composites]
            for stage, composites in zip(scenario.stages, result.stage_sets)
        }
        assert sets["tau1"] == [("S1_1", ("M1_1", "P1_1", "T1_1"))]
        assert sets["tau2"] == [
            ("S2_1", ("M2_1", "P2_1", "T2_1")),
            ("S2_2", ("M2_2", "P2_1", "T2_1")),
        ]
        assert sets["tau3"] == [
            ("S3_1", ("M3_1", "P3_1", "T3_1")),
            ("S3_2", ("M3_2", "P3_1", "T3_1")),
        ]

    def test_team_block_quality(self):
        scenario = load_scenario()
        result = startup_pipeline(scenario)
        stage2 = result.stage_sets[1]
        team_choice = {k: v for k, v in stage2[0].choice.items() if k.startswith(("L", "R", "I", "K"))}
        assert team_choice == {"L_s2": "L1", "R_s2": "R2", "I_s2": "I3", "K_s2": "K2"}

    def test_unique_trajectory(self):
        result = startup_pipeline()
        assert [
            [c.label for c in t.composites] for t in result.trajectories
        ] == [["S1_1", "S2_1", "S3_1"]]
        assert result.trajectories[0].quality == SystemQuality(3, (1, 2, 0))

    def test_invariant_under_alternative_declaration_order(self):
        from routespace import CompositePart, LeafPart, MorphStructure, Scenario, Stage

        def reverse_parts(part):
            if isinstance(part, LeafPart):
                return LeafPart(part.id, tuple(reversed(part.alternatives)))
            return CompositePart(
                part.id,
                tuple(reverse_parts(c) for c in reversed(part.children)),
                part.table,
                part.labels,
                part.repricing,
            )

        scenario = load_scenario()
        shuffled = Scenario(
            tuple(
                Stage(
                    st.id,
                    MorphStructure(reverse_parts(st.structure.root), st.structure.k, st.structure.scale_max),
                    st.priorities,
                )
                for st in scenario.stages
            ),
            scenario.links,
            scenario.k,
            scenario.scale_max,
        )
        base = startup_pipeline(scenario)
        permuted = startup_pipeline(shuffled)
        assert [
            [c.label for c in t.composites] for t in base.trajectories
        ] == [[c.label for c in t.composites] for t in permuted.trajectories]
        for left, right in zip(base.stage_sets, permuted.stage_sets):
            assert [(c.label, c.choice, c.quality) for c in left] == [
                (c.label, c.choice, c.quality) for c in right
            ]

    def test_marketing_splits_stages_two_and_three(self):
        scenario = load_scenario()
        result = startup_pipeline(scenario)
        stage2 = {c.label: c.choice for c in result.stage_sets[1]}
        assert stage2["S2_1"]["V_s2"] == "V2"
        assert stage2["S2_2"]["V_s2"] == "V3"
        stage3 = {c.label: c.choice for c in result.stage_sets[2]}
        assert (stage3["S3_1"]["U_s3"], stage3["S3_1"]["V_s3"]) == ("U2", "V2")
        assert (stage3["S3_2"]["U_s3"], stage3["S3_2"]["V_s3"]) == ("U3", "V3")
