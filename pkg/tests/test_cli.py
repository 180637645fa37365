import json
from pathlib import Path

from l0mult.cli import main

DATA = Path(__file__).parent / "data"
EXAMPLE = str(DATA / "example.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestAnalyze:
    def test_text_report(self, capsys):
        code, out, _ = run(capsys, "analyze", "--input", EXAMPLE)
        assert code == 0
        assert "kstar = 2" in out
        assert "spark=3" in out
        assert "C4: holds" in out and "D3: holds" in out

    def test_json_report(self, capsys):
        code, out, _ = run(capsys, "analyze", "--input", EXAMPLE, "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["schema_version"] == 1
        assert doc["enumeration"]["kstar"] == 2
        assert doc["boundedness"]["spark"] == 3
        assert doc["boundedness"]["bounded_certified"] is True
        assert [1, 3] in doc["enumeration"]["optimal_supports"]

    def test_byte_identical_runs(self, capsys):
        _, out1, _ = run(capsys, "analyze", "--input", EXAMPLE, "--format", "json")
        _, out2, _ = run(capsys, "analyze", "--input", EXAMPLE, "--format", "json")
        assert out1 == out2

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "analyze", "--input", EXAMPLE,
                           "--format", "json", "--output", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["enumeration"]["kstar"] == 2


class TestSubcommands:
    def test_spark(self, capsys):
        code, out, _ = run(capsys, "spark", "--input", EXAMPLE)
        assert code == 0 and out.strip() == "3"

    def test_check_feasible(self, capsys):
        code, out, _ = run(capsys, "check", "--input", EXAMPLE,
                           "--point", "0,0,2,1")
        assert code == 0
        assert "feasible" in out
        assert "{3,4}" in out and "{1,3}" in out

    def test_check_matches_is_feasible(self, capsys, example):
        from l0mult.model import is_feasible, parse_point
        for point in ("0,0,2,1", "0,1,-1/2,0", "0,0,0,0", "1,1,1,1"):
            code, out, _ = run(capsys, "check", "--input", EXAMPLE,
                               "--point", point)
            assert code == 0
            expected = is_feasible(example, parse_point(point, 4))
            assert ("infeasible" not in out) == expected

    def test_enumerate(self, capsys):
        code, out, _ = run(capsys, "enumerate", "--input", EXAMPLE,
                           "--format", "json")
        doc = json.loads(out)
        assert code == 0 and doc["kstar"] == 2
        assert doc["max_active_cardinality"] == 2

    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify", "--input", EXAMPLE,
                           "--point", "0,0,2,1", "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["conditions"]["C3"]["status"] == "holds"
        assert doc["conditions"]["C4"]["status"] == "holds"
        assert doc["conditions"]["C2"]["status"] == "fails"

    def test_family_with_direction(self, capsys):
        code, out, _ = run(capsys, "family", "--input", EXAMPLE,
                           "--point", "0,1,-1/2,0", "--condition", "D4",
                           "--direction", "0,-4,1,0", "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert abs(doc["interval"]["lower"]["float"] + 0.028867513459) < 1e-9
        assert doc["verified"] is True

    def test_family_classifier_direction(self, capsys):
        code, out, _ = run(capsys, "family", "--input", EXAMPLE,
                           "--point", "0,0,2,1", "--condition", "C4",
                           "--samples", "3")
        assert code == 0
        assert "verified 3 sampled members" in out

    def test_boundedness(self, capsys):
        code, out, _ = run(capsys, "boundedness", "--input", EXAMPLE,
                           "--format", "json")
        doc = json.loads(out)
        assert code == 0
        assert doc["E1"] and doc["E2"] and doc["E3"]
        assert doc["verdict"] == "bounded"


class TestExitCodes:
    def test_usage_error(self, capsys):
        assert run(capsys, "analyze")[0] == 1          # missing --input
        assert run(capsys, "nonsense")[0] == 1

    def test_parse_error(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        assert run(capsys, "analyze", "--input", str(bad))[0] == 2

    def test_dimension_error(self, capsys, tmp_path):
        doc = json.loads(Path(EXAMPLE).read_text())
        doc["A"][0] = doc["A"][0][:2]
        bad = tmp_path / "dim.json"
        bad.write_text(json.dumps(doc))
        assert run(capsys, "analyze", "--input", str(bad))[0] == 2

    def test_missing_file(self, capsys):
        assert run(capsys, "analyze", "--input", "/nonexistent.json")[0] == 2

    def test_work_cap(self, capsys):
        code, _, err = run(capsys, "analyze", "--input", EXAMPLE,
                           "--max-supports", "2")
        assert code == 3

    def test_no_solution_within_cap(self, capsys):
        code, _, err = run(capsys, "analyze", "--input", EXAMPLE, "--kcap", "1")
        assert code == 4

    def test_infeasible_point_for_classify(self, capsys):
        code, _, err = run(capsys, "classify", "--input", EXAMPLE,
                           "--point", "0,0,0,0")
        assert code == 1
        assert "not feasible" in err

    def test_non_sparsest_point_for_classify(self, capsys):
        code, _, err = run(capsys, "classify", "--input", EXAMPLE,
                           "--point", "1/2,17/100,-1/4,0")
        # feasibility first; this point has three nonzeros
        assert code in (1, 2)
