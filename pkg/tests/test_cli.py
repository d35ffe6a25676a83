"""Command-line interface: envelope shape, exit codes, determinism.

main() is exercised in process; stdout is a single JSON document per
invocation, parsed back and checked field by field.
"""

import io
import json

import pytest

from valjet.cli import main

F_CUSP = "x1^2 - x0^3"
F_QUARTIC = "(x1^2 - x0^3)^2 - x0^6*x1"
H_PROBE = "(x1^2 - x0^3)^2 - 4*x0^5*x1 - x0^7"

CUSP_PARAM = {"n": 2, "x1": [{"k": 3, "c": "1"}],
              "truncation": 40, "exact": True}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out), out


def test_envelope_and_nu_value(capsys):
    code, doc, _ = run(capsys, "nu", "--f", F_QUARTIC, "--h", H_PROBE)
    assert code == 0
    assert doc["schema"] == "valjet/1"
    assert doc["command"] == "nu"
    assert doc["seed"] == 0
    assert doc["zero_test"] == {"mode": "probabilistic", "trials": 2,
                                "primes": 3}
    assert doc["result"]["value"] == 26
    assert doc["result"]["certificate"]["witness"] == "-4*u1^26"
    assert len(doc["result"]["certificate"]["digest"]) == 64


def test_policy_flags_recorded(capsys):
    code, doc, _ = run(capsys, "semigroup", "--f", F_CUSP,
                       "--seed", "9", "--trials", "5")
    assert code == 0
    assert doc["seed"] == 9
    assert doc["zero_test"]["trials"] == 5
    code, doc, _ = run(capsys, "semigroup", "--f", F_CUSP, "--exact")
    assert doc["zero_test"] == {"mode": "exact"}


def test_semigroup(capsys):
    code, doc, _ = run(capsys, "semigroup", "--f", F_QUARTIC)
    assert code == 0
    sg = doc["result"]["semigroup"]
    assert sg["beta_bar"] == [4, 6, 15]
    assert sg["conductor"] == 18
    assert doc["result"]["param"]["n"] == 4


def test_jets(capsys):
    code, doc, _ = run(capsys, "jets", "--f", F_CUSP, "--m", "2")
    assert code == 0
    assert doc["result"]["m"] == 2
    assert doc["result"]["F"] == [
        "x1#0^2 - x0#0^3",
        "2*x1#0*x1#1 - 3*x0#0^2*x0#1",
        "2*x1#0*x1#2 + x1#1^2 - 3*x0#0^2*x0#2 - 3*x0#0*x0#1^2",
    ]


def test_initial_form(capsys):
    code, doc, _ = run(capsys, "initial-form", "--f", F_QUARTIC,
                       "--h", H_PROBE)
    assert code == 0
    assert doc["result"] == {"value": 26, "initial": "-4*x0^5*x1"}
    code, doc, _ = run(capsys, "initial-form", "--f", F_QUARTIC,
                       "--h", F_CUSP)
    assert doc["result"] == {"value": 15, "initial": "x1^2 - x0^3"}


def test_nu_e(capsys):
    code, doc, _ = run(capsys, "nu-e", "--f", F_CUSP, "--h", "x0",
                       "--p", "7")
    assert code == 0
    assert doc["result"] == {"p": 7, "value": 2}


def test_components(capsys):
    code, doc, _ = run(capsys, "components", "--f", F_QUARTIC, "--m", "29")
    assert code == 0
    kinds = [c["kind"] for c in doc["result"]["components"]]
    assert kinds == ["C", "B"]
    assert doc["result"]["m"] == 29


def test_genseq(capsys):
    code, doc, _ = run(capsys, "genseq", "--f", F_QUARTIC)
    assert code == 0
    res = doc["result"]
    assert res["kind"] == "curve"
    assert res["values"] == [4, 6, 15, None]
    assert [el["name"] for el in res["elements"]] == ["x0", "x1", "x2", "f"]
    assert res["elements"][2]["poly"] == "x1^2 - x0^3"
    assert [(s["mu"], s["l"]) for s in res["log"]] == [(29, 1)]


def test_divisorial_with_toric(capsys, tmp_path):
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(CUSP_PARAM))
    code, doc, _ = run(capsys, "divisorial", "--param", str(path),
                       "--p", "7", "--toric")
    assert code == 0
    res = doc["result"]
    assert res["kind"] == "divisorial"
    assert res["contact"] == 7
    assert res["values"] == [2, 3, 7]
    toric = res["toric"]
    assert toric["alpha"] == [2, 3, 7]
    assert toric["fan"]["dim"] == 3
    assert [[1, 2, 3], [2, 3, 6], [2, 3, 7]] in toric["fan"]["cones"]
    assert {"x0": "u*v^2*w^2", "x1": "u^2*v^3*w^3",
            "y2": "u^3*v^6*w^7"} in toric["charts"]
    assert toric["verification"]["ok"]
    assert toric["nondegeneracy"]["ok"]


def test_param_from_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(CUSP_PARAM)))
    code, doc, _ = run(capsys, "semigroup", "--param", "-")
    assert code == 0
    assert doc["result"]["semigroup"]["beta_bar"] == [2, 3]


def test_verify(capsys):
    code, doc, _ = run(capsys, "verify", "--f", F_CUSP)
    assert code == 0
    assert doc["result"]["report"]["ok"] is True
    assert doc["result"]["genseq"]["values"] == [2, 3, None]
    assert all(c["ok"] for c in doc["result"]["report"]["checks"])


def test_deterministic_output(capsys):
    _, _, first = run(capsys, "nu", "--f", F_QUARTIC, "--h", H_PROBE,
                      "--seed", "3")
    _, _, second = run(capsys, "nu", "--f", F_QUARTIC, "--h", H_PROBE,
                       "--seed", "3")
    assert first == second

    _, _, one = run(capsys, "toric", "--f", F_CUSP, "--p", "7")
    _, _, two = run(capsys, "toric", "--f", F_CUSP, "--p", "7")
    assert one == two


def test_pretty_prints_indented(capsys):
    code, doc, raw = run(capsys, "semigroup", "--f", F_CUSP, "--pretty")
    assert code == 0
    assert raw.startswith("{\n  ")
    assert doc["schema"] == "valjet/1"


def test_domain_errors_exit_2(capsys):
    # vanishing probe
    code, doc, _ = run(capsys, "nu", "--f", F_CUSP, "--h", F_CUSP)
    assert code == 2
    assert doc["error"]["type"] == "domain"
    assert "vanishes" in doc["error"]["message"]
    assert "result" not in doc

    # syntax error in the polynomial
    code, doc, _ = run(capsys, "nu", "--f", F_CUSP, "--h", "x0 +* x1")
    assert code == 2
    assert "unexpected token" in doc["error"]["message"]

    # reducible curve
    code, doc, _ = run(capsys, "genseq", "--f", "x0*x1")
    assert code == 2

    # missing required flag
    code, doc, _ = run(capsys, "nu", "--f", F_CUSP)
    assert code == 2
    assert "--h" in doc["error"]["message"]

    # unreadable parametrization file
    code, doc, _ = run(capsys, "semigroup", "--param", "/nonexistent.json")
    assert code == 2
    assert "cannot read" in doc["error"]["message"]

    # malformed parametrization document
    code, doc, _ = run(capsys, "divisorial", "--param", "-", "--p", "7")
    assert code == 2


def test_malformed_param_json(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("{not json"))
    code, doc, _ = run(capsys, "semigroup", "--param", "-")
    assert code == 2
    assert "not valid JSON" in doc["error"]["message"]


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
