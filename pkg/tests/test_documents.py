"""File formats, DOT export, and the command-line surface."""

import json
import subprocess
import sys

import pytest

from routespace import DesignSpace, Scenario, TreatmentScheme
from routespace.cli import main
from routespace.documents import (
    ParseError,
    ValidationError,
    dumps,
    parse_document,
    parse_space_file,
)
from routespace.dot import export_dot
from routespace.presets import data_path, load_scheme, load_space

BUNDLED = (
    "educational_space.json",
    "medical_scheme.json",
    "medical_structure.json",
    "startup_scenario.json",
    "example1_space.json",
    "example2_space.json",
    "example3_space.json",
    "mc_demo_space.json",
    "orienteering_demo_space.json",
)


class TestParsing:
    def test_bundled_educational_space(self):
        space = parse_space_file(data_path("educational_space.json"))
        assert isinstance(space, DesignSpace)
        assert len(space.vertices) == 24

    def test_kinds_dispatch(self):
        assert isinstance(parse_space_file(data_path("startup_scenario.json")), Scenario)
        assert isinstance(parse_space_file(data_path("medical_scheme.json")), TreatmentScheme)

    def test_duplicate_vertex_id_is_a_validation_error(self):
        doc = {
            "schema_version": 1,
            "kind": "space",
            "vertices": [{"id": "a"}, {"id": "a"}],
            "arcs": [],
            "origins": ["a"],
            "goals": ["a"],
        }
        with pytest.raises(ValidationError) as err:
            parse_document(json.dumps(doc))
        assert any("duplicate vertex id" in v for v in err.value.violations)

    def test_empty_file_is_a_parse_error(self):
        with pytest.raises(ParseError):
            parse_document("")

    def test_float_weights_are_rejected(self):
        doc = {
            "schema_version": 1,
            "kind": "space",
            "vertices": [{"id": "a"}, {"id": "b"}],
            "arcs": [{"tail": "a", "head": "b", "weight": 1.5}],
            "origins": ["a"],
            "goals": ["b"],
        }
        with pytest.raises(ParseError) as err:
            parse_document(json.dumps(doc))
        assert "binary floats" in str(err.value)

    def test_rational_strings_round_trip(self):
        doc = {
            "schema_version": 1,
            "kind": "space",
            "vertices": [{"id": "a"}, {"id": "b", "duration": "7/2"}],
            "arcs": [{"tail": "a", "head": "b", "weight": "3/4"}],
            "origins": ["a"],
            "goals": ["b"],
        }
        space = parse_document(json.dumps(doc))
        again = parse_document(dumps(space))
        assert again == space

    def test_round_trip_every_bundled_dataset(self):
        for name in BUNDLED:
            value = parse_space_file(data_path(name))
            assert parse_document(dumps(value)) == value, name

    def test_unknown_kind(self):
        with pytest.raises(ParseError):
            parse_document('{"schema_version": 1, "kind": "mystery"}')


class TestDotExport:
    def test_empty_space_is_header_only(self):
        from routespace import make_space

        space = make_space([], [], [], [])
        text = export_dot(space)
        assert text.splitlines()[0] == "digraph design_space {"
        assert "->" not in text

    def test_scheme_styles_points_distinctly(self):
        text = export_dot(load_scheme())
        assert text.count("peripheries=2") == 5  # design points
        assert text.count("shape=diamond") == 3  # analysis points
        assert 'shape=box' in text

    def test_byte_determinism(self):
        space = load_space()
        assert export_dot(space) == export_dot(space)

    def test_route_overlay(self):
        space = load_space()
        text = export_dot(space, [("a1", "b1", "g1", "h3", "p1")])
        assert '"a1" -> "b1" [label="1", penwidth=2.0, color=red];' in text


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCli:
    def test_solve_sp_reachable(self, capsys):
        code, out, _ = run_cli(
            ["solve-sp", "--input", str(data_path("educational_space.json")), "--origin", "a1", "--goal", "p1"],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["route"]["vertices"][0] == "a1"

    def test_solve_sp_unreachable_exits_one(self, tmp_path, capsys):
        doc = {
            "schema_version": 1,
            "kind": "space",
            "vertices": [{"id": "a"}, {"id": "b"}],
            "arcs": [],
            "origins": ["a"],
            "goals": ["b"],
        }
        path = tmp_path / "space.json"
        path.write_text(json.dumps(doc))
        code, out, _ = run_cli(["solve-sp", "--input", str(path)], capsys)
        assert code == 1
        assert json.loads(out)["route"] is None

    def test_negative_budget_exits_two(self, capsys):
        code, _, err = run_cli(
            ["orienteer", "--input", str(data_path("orienteering_demo_space.json")), "--budget", "-1"],
            capsys,
        )
        assert code == 2
        assert "nonnegative" in err

    def test_orienteer_demo(self, capsys):
        code, out, _ = run_cli(
            ["orienteer", "--input", str(data_path("orienteering_demo_space.json")), "--budget", "4"],
            capsys,
        )
        assert code == 0
        report = json.loads(out)
        assert report["route"]["vertices"] == ["s", "b", "t"]
        assert report["score"] == 6

    def test_edu_audit(self, capsys):
        code, out, _ = run_cli(["edu", "--audit"], capsys)
        assert code == 0
        report = json.loads(out)
        assert len(report["discrepancies"]) == 4

    def test_malformed_document_exits_two(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        code, _, err = run_cli(["solve-sp", "--input", str(path)], capsys)
        assert code == 2
        assert "broken.json" in err

    def test_wrong_document_kind_exits_two(self, capsys):
        code, _, err = run_cli(
            ["synthesize", "--input", str(data_path("educational_space.json"))], capsys
        )
        assert code == 2
        assert "morph" in err

    def test_unknown_flag_exits_two(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["solve-sp", "--nonsense"])
        assert err.value.code == 2

    def test_tsv_format(self, capsys):
        code, out, _ = run_cli(["startup", "--format", "tsv"], capsys)
        assert code == 0
        assert out.splitlines()[0] == "trajectory\tquality"

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        code, out, _ = run_cli(["edu", "--audit", "--out", str(target)], capsys)
        assert code == 0
        assert out == ""
        assert json.loads(target.read_text())["run"]["subcommand"] == "edu"

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "routespace", "startup", "--format", "tsv"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "S1_1>S2_1>S3_1" in proc.stdout
