import json
from importlib.resources import files

import jsonschema
import pytest

from shiftops import cli


def load_schema(name):
    return json.loads(files("shiftops").joinpath("schemas", name).read_text())


REPORT_SCHEMA = load_schema("report.schema.json")
GALG_SCHEMA = load_schema("galg.schema.json")


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_poly_E_diff(capsys):
    code, out, _ = run(capsys, "poly", "E", "--diff", "--type", "A1", "--weight", "-1")
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, GALG_SCHEMA)
    assert data == {"weights": [[-1], [1]], "coeffs": ["1", "k1/(k1+1)"]}


def test_poly_E_constant(capsys):
    code, out, _ = run(capsys, "poly", "E", "--diff", "--type", "A1", "--weight", "0")
    assert code == 0 and json.loads(out) == {"weights": [[0]], "coeffs": ["1"]}


def test_poly_P_q(capsys):
    code, out, _ = run(capsys, "poly", "P", "--q", "--pair", "case1:A1", "--weight", "1")
    assert code == 0 and json.loads(out) == {"weights": [[-1], [1]], "coeffs": ["1", "1"]}


def test_poly_rational_parameters(capsys):
    code, out, _ = run(capsys, "poly", "E", "--diff", "--type", "A1", "--weight", "-1", "--k", "1")
    assert code == 0 and json.loads(out)["coeffs"] == ["1", "1/2"]


@pytest.mark.parametrize("direction, weight, factor", [("forward", "2", "1"), ("backward", "0", "k1+2*k2")])
def test_shift_bc1(capsys, direction, weight, factor):
    code, out, _ = run(capsys, "shift", "--diff", "--type", "BC1", "--char", "sign",
                       "--direction", direction, "--weight", weight)
    data = json.loads(out)
    assert code == 0
    assert data["factor"] == factor and data["closed_form"] == factor and data["agree"]


def test_shift_sign_forward_on_one(capsys):
    code, out, _ = run(capsys, "shift", "--diff", "--type", "A1", "--char", "sign", "--weight", "0")
    data = json.loads(out)
    assert code == 0 and data["image"] == {"weights": [], "coeffs": []} and data["factor"] == "0"


def test_shift_q(capsys):
    code, out, _ = run(capsys, "shift", "--q", "--pair", "case1:A1", "--char", "sign", "--weight", "2")
    data = json.loads(out)
    assert code == 0 and data["agree"] and data["target"] == [1]


def test_unavailable_character(capsys):
    code, _, err = run(capsys, "shift", "--diff", "--type", "A2", "--char", "eps-short", "--weight", "0,0")
    assert code == 2 and "not available" in err


@pytest.mark.parametrize("argv", [
    ["poly", "E", "--diff", "--type", "A1", "--weight", "x"],
    ["poly", "E", "--diff", "--type", "G2", "--weight", "1,0"],
    ["poly", "E", "--diff", "--type", "BC1", "--weight", "1", "--k", "1"],
    ["poly", "E", "--q", "--pair", "case9:A1", "--weight", "1"],
    ["verify", "--suite", "nonsense", "--type", "A1"],
    ["verify", "--suite", "q-hecke", "--type", "A1"],
    ["verify", "--suite", "norms", "--type", "A1"],
    ["poly", "E"],
])
def test_malformed_input_exits_2(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_verify_norms_table(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "norms", "--type", "A1", "--k", "1")
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert code == 0 and data["passed"]
    ratios = {r["ratio"] for r in data["results"][0]["notes"]["ratios"]}
    assert {"2", "3/2"} <= ratios


def test_verify_transmutation_bc1(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "transmutation", "--type", "BC1", "--window", "6", "--symbolic")
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert code == 0 and data["passed"]


def test_verify_q_transmutation_records_variant(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "q-transmutation", "--pair", "case3:C1vC1", "--window", "3")
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert code == 0 and data["passed"]
    assert data["results"][0]["notes"]["selected_variant"] == "hecke"


def test_verify_all_q_suites(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "all", "--pair", "case1:A1", "--window", "2")
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert code == 0
    assert {r["identity"].split(":")[0] for r in data["results"]} == set(cli.Q_SUITES)


def test_failed_identity_exits_1_with_counterexample(capsys, monkeypatch):
    def broken(ctx):
        rec = cli.Recorder("deliberately false")
        rec.check(False, {"weight": (1,)}, "lhs", "rhs")
        return [rec.result()]

    monkeypatch.setitem(cli.SUITES, "commute", broken)
    code, out, _ = run(capsys, "verify", "--suite", "commute", "--type", "A1")
    data = json.loads(out)
    jsonschema.validate(data, REPORT_SCHEMA)
    assert code == 1 and not data["passed"]
    assert data["results"][0]["counterexample"]["inputs"] == {"weight": [1]}


def test_reports_are_byte_identical(capsys):
    argv = ["verify", "--suite", "shift-factor", "--type", "BC1", "--window", "3"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_report_round_trip(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "eigen", "--type", "A1", "--k", "1", "--window", "3")
    data = json.loads(out)
    assert cli.VerificationReport.from_json(data).to_json() == data


def test_timing_flag_records_wall_time(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "hecke", "--type", "A1", "--window", "2", "--timing")
    assert isinstance(json.loads(out)["wall_time"], float)


def test_environment_window(capsys, monkeypatch):
    monkeypatch.setenv("SHIFTOPS_WINDOW", "2")
    _, out, _ = run(capsys, "verify", "--suite", "hecke", "--type", "A1")
    assert json.loads(out)["case"]["window"] == 2
    monkeypatch.setenv("SHIFTOPS_WINDOW", "two")
    code, _, _ = run(capsys, "verify", "--suite", "hecke", "--type", "A1")
    assert code == 2


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "case.cfg"
    cfg.write_text("type = BC1\nk = 1,1\nwindow = 3\n")
    code, out, _ = run(capsys, "verify", "--suite", "adjoint", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and data["case"]["window"] == 3 and data["case"]["parameters"] == "1,1"
    code, _, _ = run(capsys, "verify", "--suite", "adjoint", "--config", str(tmp_path / "missing.cfg"))
    assert code == 2
