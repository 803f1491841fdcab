import json
import subprocess
import sys

import pytest

from conftest import GOLDEN
from iql.cli import main
from iql.instances import fixture_path, load_instance
from iql.iso import find_isomorphism
from iql.workbench import check_report, export_dot


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return fixture_path(name)


def test_check_all_mo2(capsys):
    code, out, _ = run(capsys, "check", fx("mo2.json"), "--suite", "all")
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert [r["suite"] for r in rep["reports"]][:5] == ["oml", "daseinisation", "presheaf", "downset", "consequence"]
    assert rep["instance"]["digest"].startswith("sha256:")


def test_check_o6_oml_fails_with_witness(capsys):
    code, out, _ = run(capsys, "check", fx("o6.json"), "--suite", "oml")
    rep = json.loads(out)
    assert code == 1
    (om,) = [c for c in rep["reports"][0]["checks"] if c["law"].startswith("orthomodular")]
    assert om["witnesses"][0][:2] == ["x", "y"]


def test_check_o6_skips_context_suites(capsys):
    code, out, _ = run(capsys, "check", fx("o6.json"), "--suite", "presheaf")
    rep = json.loads(out)
    assert code == 0 and rep["reports"][0]["skipped"] == ["lattice is not orthomodular"]
    code, out, _ = run(capsys, "check", fx("o6.json"), "--suite", "downset")
    assert code == 0


def test_check_presheaf_has_classification(capsys):
    code, out, _ = run(capsys, "check", fx("mo2.json"), "--suite", "presheaf")
    rep = json.loads(out)
    assert code == 0
    assert rep["classification"]["triviality"]["subobjects"] == 16


def test_classification_does_not_affect_exit_code(capsys):
    # Boolean 2^3 logs theorem-scope counterexamples but still exits 0
    code, out, _ = run(capsys, "check", fx("boolean-2-3.json"), "--suite", "presheaf")
    assert code == 0
    assert json.loads(out)["classification"]["triviality"]["theorem_scope_counterexamples"] > 0


def test_capacity_exit_code(capsys, monkeypatch):
    code, _, err = run(capsys, "check", fx("c3-demo.json"), "--cap", "6")
    assert code == 2 and "capacity" in err
    monkeypatch.setenv("IQL_MAX_ELEMENTS", "6")
    code, _, _ = run(capsys, "check", fx("c3-demo.json"), "--suite", "oml")
    assert code == 2
    code, _, _ = run(capsys, "check", fx("c3-demo.json"), "--suite", "oml", "--cap", "128")
    assert code == 0


def test_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as info:
        main(["check"])
    assert info.value.code == 2
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    code, _, err = run(capsys, "check", bad)
    assert code == 2 and "JSON" in err
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({
        "kind": "table",
        "table": {"elements": ["0", "a", "~a", "1"], "leq": [["0", "a"], ["0", "~a"], ["a", "1"], ["~a", "1"]],
                  "ortho": {"0": "1", "1": "0", "a": "a", "~a": "~a"}},
    }), encoding="utf-8")
    code, _, err = run(capsys, "check", broken)
    assert code == 2 and "'a'" in err
    code, _, err = run(capsys, "check", tmp_path / "missing.json")
    assert code == 2


def test_daseinise(capsys):
    code, out, _ = run(capsys, "daseinise", fx("mo2.json"), "--element", "b")
    rows = json.loads(out)["daseinisation"]["contexts"]
    assert rows == [
        {"context": "{a, ~a}", "outer": "1", "inner": "0"},
        {"context": "{b, ~b}", "outer": "b", "inner": "b"},
    ]
    code, _, err = run(capsys, "daseinise", fx("mo2.json"), "--element", "zz")
    assert code == 2 and "zz" in err


def test_implies(capsys):
    code, out, _ = run(capsys, "implies", fx("mo2.json"), "--structure", "downset", "--s", "a", "--t", "b")
    assert json.loads(out)["implication"]["members"] == ["0", "~a", "b", "~b"]
    code, out, _ = run(capsys, "implies", fx("mo2.json"), "--structure", "presheaf", "--s", "a", "--t", "0")
    rows = json.loads(out)["implication"]
    assert rows[0]["value"] == ["~a"] and rows[0]["outcome"] == "other/minimal-context"


def test_revise(capsys):
    code, out, _ = run(capsys, "revise", fx("c3-demo.json"), "--script", fx("scripts/static-then-dynamic.json"))
    assert code == 0 and json.loads(out)["final"] == {"antecedent": "↓e1", "epoch": 1, "inconsistent": False}
    code, out, _ = run(capsys, "revise", fx("c3-demo.json"), "--script", fx("scripts/dynamic-then-static.json"))
    assert code == 0 and json.loads(out)["final"] == {"antecedent": "{0}", "epoch": 1, "inconsistent": True}
    code, out, _ = run(capsys, "revise", fx("c3-demo.json"), "--script", fx("scripts/empty.json"))
    rep = json.loads(out)
    assert rep["steps"] == [] and rep["final"]["antecedent"] == "↓c"


def test_revise_bad_reference(capsys, tmp_path):
    script = tmp_path / "s.json"
    script.write_text(json.dumps({"antecedent": ["c"], "steps": [{"type": "dynamic", "projector": "nope"}]}))
    code, _, err = run(capsys, "revise", fx("c3-demo.json"), "--script", script)
    assert code == 2 and "nope" in err


def test_demo(capsys):
    code, out, _ = run(capsys, "demo", "order-dependence", fx("c3-demo.json"),
                       "--antecedent", "c", "--formula", "b", "--projector", "a")
    assert code == 0 and "D = ↓e1" in out and "E = {0}" in out
    code, out, _ = run(capsys, "demo", "order-dependence", fx("boolean-2-3.json"))
    assert code == 0 and "no witness (distributive)" in out
    code, out, _ = run(capsys, "demo", "order-dependence", fx("mo2.json"))
    assert out == (GOLDEN / "mo2-order-dependence.txt").read_text(encoding="utf-8")
    code, _, _ = run(capsys, "demo", "order-dependence", fx("mo2.json"), "--formula", "a")
    assert code == 2


def test_export_dot(capsys, tmp_path):
    out = tmp_path / "mo2.dot"
    code, _, _ = run(capsys, "export-dot", fx("mo2.json"), "--what", "lattice", "-o", out)
    text = out.read_text()
    assert code == 0 and text.count("[label=") == 6 and text.count("->") == 8
    mo2 = load_instance(fx("mo2.json"))
    ctx = export_dot(mo2, "contexts")
    assert ctx.count("[label=") == 2 and "->" not in ctx
    b22 = load_instance(fx("boolean-2-2.json"))
    ds = export_dot(b22, "downsets")
    # {0} < ↓a, ↓~a < ↓a∪↓~a < ↓1
    assert ds.count("[label=") == 5 and ds.count("->") == 5


def test_isomorphism_of_backends():
    mo2, c2 = load_instance(fx("mo2.json")), load_instance(fx("c2-rays.json"))
    f = find_isomorphism(mo2, c2)
    assert f is not None
    for x in range(mo2.n):
        assert c2.ortho(f[x]) == f[mo2.ortho(x)]
        for y in range(mo2.n):
            assert mo2.leq(x, y) == c2.leq(f[x], f[y])
    assert find_isomorphism(mo2, load_instance(fx("o6.json"))) is None
    assert find_isomorphism(mo2, load_instance(fx("boolean-2-2.json"))) is None


def _strip(rep):
    """Suite results without labels: law, domain size, verdict, failure count."""
    return [
        (r["suite"], [(c["law"], c["domain_size"], c["pass"], c["failures"]) for c in r["checks"]])
        for r in rep["reports"]
        if r["suite"] != "hilbert-cross-check"
    ]


def test_backends_agree_on_every_suite():
    a = check_report(fx("mo2.json"))
    b = check_report(fx("c2-rays.json"))
    assert _strip(a) == _strip(b)
    assert a["classification"]["triviality"]["outcomes"] == b["classification"]["triviality"]["outcomes"]


@pytest.mark.parametrize("stem", ["mo2", "c3-demo"])
def test_report_matches_golden(stem, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(capsys, "check", fx(stem + ".json"), "-o", out)[0] in (0, 1)
    assert out.read_bytes() == (GOLDEN / f"{stem}-report.json").read_bytes()


def test_reports_are_byte_identical_across_processes(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        subprocess.run(
            [sys.executable, "-m", "iql.cli", "check", str(fx("mo2.json")), "-o", str(path)],
            check=True,
            env={"PYTHONHASHSEED": str(i + 1), "PATH": ""},
        )
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
