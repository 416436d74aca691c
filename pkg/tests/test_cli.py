import json
from importlib import resources

import jsonschema
import pytest

from kunneth import cli
from kunneth.charts import parse_ascii, parse_svg
from kunneth.comparison import koszul_resolution, polynomial_ring, resolution_to_dict
from kunneth.errors import CollapseHypothesisFailed
from kunneth.pipeline import DLActionTable, ObstructionReport, SmashHomotopyTable


def schema(name):
    return json.loads((resources.files("kunneth") / "schemas" / f"{name}.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_tor_chart(capsys):
    code, out, _ = run(capsys, "tor", "--ring", "ku", "--prime", "2", "--max-degree", "8", "--format", "chart")
    assert code == 0
    classes, arrows = parse_ascii(out)
    assert {c[0] for c in classes} == {"1", "2b", "vb", "2bvb"}
    assert "2̄v̄" in out


def test_tor_json_round_trip_and_schema(capsys):
    code, out, _ = run(capsys, "tor", "--ring", "BP2", "--prime", "3", "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, schema("tor"))
    table = SmashHomotopyTable.from_dict(data["table"])
    assert table.to_dict() == data["table"]
    assert out.isascii()


def test_dl_action_json(capsys):
    code, out, _ = run(capsys, "dl-action", "--ring", "BP2", "--prime", "2", "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, schema("dl-action"))
    assert len(data["table"]["entries"]) == 4
    assert DLActionTable.from_dict(data["table"]).to_dict() == data["table"]
    assert data["descriptor"]["name"] == "BP2" and data["truncation"] == 24


def test_dl_action_svg_matches_chart(capsys, tmp_path):
    svg = tmp_path / "bp2.svg"
    assert cli.main(["dl-action", "--ring", "BP2", "--prime", "2", "--format", "svg", "-o", str(svg)]) == 0
    _, chart, _ = run(capsys, "dl-action", "--ring", "BP2", "--prime", "2", "--format", "chart")
    assert parse_svg(svg.read_text()) == parse_ascii(chart)


def test_detect_override(capsys):
    code, out, _ = run(capsys, "dl-action", "--ring", "ku", "--prime", "2", "--detect", "2=plain,v=plain")
    assert code == 0
    assert json.loads(out)["table"]["detection"] == {"2": "plain", "v": "plain"}
    code, _, err = run(capsys, "dl-action", "--ring", "ku", "--prime", "2", "--detect", "w=plain")
    assert code == 1 and "KunnethError" in err


def test_realizable(capsys):
    code, out, _ = run(capsys, "realizable", "--ideal", "x2", "--prime", "2")
    assert code == 0 and "condition-not-met" in out
    code, out, _ = run(capsys, "realizable", "--ideal", "x1,2", "--prime", "2", "--format", "json")
    data = json.loads(out)
    jsonschema.validate(data, schema("obstruction"))
    data.pop("kind")
    assert ObstructionReport.from_dict(data).witness == ("x1", "Q^4", "x3")
    code, out, _ = run(capsys, "realizable", "--ideal", "2,x1", "--prime", "2", "--xfamily-infinite")
    assert "condition-not-met" in out


def test_exit_code_unsupported_ideal(capsys):
    code, _, err = run(capsys, "realizable", "--ideal", "2,z", "--prime", "2")
    assert code == cli.EXIT_IDEAL == 4
    assert "UnsupportedIdealShape" in err


def test_exit_code_truncation(capsys):
    code, _, err = run(capsys, "conjugate", "--xi", "5", "--prime", "2", "--max-degree", "16")
    assert code == cli.EXIT_TRUNCATION == 5
    assert "TruncationExceeded" in err


def test_exit_code_collapse(capsys, monkeypatch):
    def fail(desc, t_max=None):
        raise CollapseHypothesisFailed("Tor is not generated by the 1-line (s, t) = (2, 4)")
    monkeypatch.setattr("kunneth.pipeline.compute_smash_homotopy", fail)
    code, _, err = run(capsys, "tor", "--ring", "ku", "--prime", "2")
    assert code == cli.EXIT_COLLAPSE == 3
    assert "(2, 4)" in err


def test_generic_error_exit(capsys):
    code, _, err = run(capsys, "tor", "--ring", "ku", "--prime", "2", "--max-degree", "2")
    assert code == 1 and "at least 4" in err


def test_env_truncation(capsys, monkeypatch):
    monkeypatch.setenv(cli.ENV_TRUNCATION, "8")
    _, out, _ = run(capsys, "tor", "--ring", "MU", "--prime", "2", "--format", "json")
    data = json.loads(out)
    assert data["truncation"] == 8 and data["descriptor"]["sequence"][-1] == "x4"


def test_difference_classes(capsys):
    _, out, _ = run(capsys, "difference-classes", "--ring", "ku", "--ascii-safe")
    assert out.splitlines() == ["2 -> 2b @ 1", "v -> vb @ 3"]


def test_conjugate_methods(capsys):
    _, rec, _ = run(capsys, "conjugate", "--xi", "2", "--prime", "2")
    _, comp, _ = run(capsys, "conjugate", "--xi", "2", "--prime", "2", "--method", "compositions")
    assert rec == comp == "chi(xi2) = xi1^3 + xi2\n"


def test_kernel_closure(capsys):
    _, out, _ = run(capsys, "kernel-closure", "--ring", "ku", "--prime", "2", "--kernel", "2",
                    "--indecomposable", "v", "--format", "json")
    assert json.loads(out)["violations"] == [{"kernel_element": "2", "operation": "Q^2", "image": "v"}]


def test_lift(capsys, tmp_path):
    R = polynomial_ring(2, [1, 2], 6)
    F = koszul_resolution(R, ["y1", "y2"])
    G = koszul_resolution(R, ["y1", "y2"])
    for name, res in (("F", F), ("G", G)):
        data = resolution_to_dict(res)
        jsonschema.validate(data, schema("resolution"))
        (tmp_path / f"{name}.json").write_text(json.dumps(data))
    (tmp_path / "map.json").write_text(json.dumps({"images": {}, "scalar": 1}))
    code, out, _ = run(capsys, "lift", "--source", str(tmp_path / "F.json"),
                       "--target", str(tmp_path / "G.json"), "--map", str(tmp_path / "map.json"))
    assert code == 0 and json.loads(out)["verified"] is True


def test_audit(capsys):
    code, out, _ = run(capsys, "audit", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert all(not r["violations"] for r in data["tables"])
    assert data["flagged_formulas"]["2"] == []


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
