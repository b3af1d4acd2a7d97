import io
import json
from pathlib import Path

from cbvkit.cli import main, verify_generating
from cbvkit.shuffles import brute_force_straight_shuffles
from cbvkit.structfile import load
from cbvkit.ym import build_ym

STRUCTURES = Path(__file__).resolve().parent.parent / "structures"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_verify_shipped_ym():
    code, text = run("verify", STRUCTURES / "ym_d4.json")
    assert code == 0
    assert "is-cBV(2): yes" in text and "is-BV(2): no" in text
    assert "n1;1" in text.split("nonzero obstructions:")[1].splitlines()[0]


def test_verify_strict_de_rham():
    code, text = run("verify", STRUCTURES / "de_rham_d2.json")
    assert code == 0 and "is-cBV: yes" in text


def test_verify_broken_symmetry():
    code, text = run("verify", STRUCTURES / "broken_symmetry.json")
    assert code == 1
    assert "[FAIL] symmetry m0;2" in text and "witness" in text


def test_verify_parse_errors(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"carrier": {"basis": [["a", 0]]}, "maps": {"0;2": [{"in": ["a", "a"], "out": [["0.5", "a"]]}]}}')
    assert run("verify", p)[0] == 2
    assert run("verify", tmp_path / "nope.json")[0] == 2
    assert run("verify")[0] == 2


def test_missing_generators_need_fill_zero(tmp_path):
    rec = {
        "metadata": {"fill_zero": False},
        "carrier": {"basis": [["u", 0]]},
        "maps": {"0;2": [{"in": ["u", "u"], "out": [["1/1", "u"]]}]},
    }
    p = tmp_path / "unit.json"
    p.write_text(json.dumps(rec))
    assert run("verify", p)[0] == 2
    rec["metadata"]["fill_zero"] = True
    p.write_text(json.dumps(rec))
    assert run("verify", p)[0] == 0


def test_structured_output_is_line_delimited():
    code, text = run("verify", STRUCTURES / "de_rham_d2.json", "--format", "structured")
    recs = [json.loads(line) for line in text.splitlines() if line]
    assert code == 0 and all({"check", "status"} <= set(r) for r in recs)


def test_round_trip_reproduces_report(tmp_path):
    p = tmp_path / "ym2.json"
    assert run("ym", "--dim", 2, "--export", p)[0] == 0
    code, text = run("verify", p)
    assert code == 0
    assert text.strip() == verify_generating(build_ym(2)).text()
    assert verify_generating(load(p), max_arity=4).text() == verify_generating(build_ym(2), max_arity=4).text()


def test_table():
    code, text = run("table", "--weight", 1, "--check")
    assert code == 0 and text.count("agrees") == 2
    code, text = run("table", "--weight", 2, "--check")
    assert code == 1 and "[FAIL] n1;1,1 agrees" in text
    assert run("table", "--weight", 4, "--check")[0] == 2
    code, text = run("table", "--weight", 4)
    assert code == 0 and text.startswith("obstructions of weight 4")


def test_seed_resolution(monkeypatch):
    monkeypatch.setenv("CBV_SEED", "77")
    assert "seed 77" in run("table", "--weight", 1, "--check")[1]
    assert "seed 5" in run("table", "--weight", 1, "--check", "--seed", 5)[1]
    assert "seed 6" in run("--seed", 6, "table", "--weight", 1, "--check")[1]
    monkeypatch.setenv("CBV_SEED", "abc")
    assert run("table", "--weight", 1, "--check")[0] == 2


def test_shuffles():
    code, text = run("shuffles", "--q", 1, "--p", 1)
    assert code == 0 and text.splitlines()[-1].startswith("1 straight")
    code, text = run("shuffles", "--q", "1,2", "--p", "2,2")
    assert text.splitlines()[-1].startswith(f"{len(brute_force_straight_shuffles((1, 2), (2, 2)))} straight")
    code, text = run("shuffles", "--q", "1,2,2,2", "--p", "4,4,3,2")
    assert "sigma=[2 3 11 13 4 5 10 12 1 6 7 8 9] l=(1, 0, 1, 0) r=(2, 2, 0, 0)" in text
    assert run("shuffles", "--q", "1,a", "--p", "2,2")[0] == 2
    assert run("shuffles", "--q", "3", "--p", "2")[0] == 2
    assert run("shuffles", "--q", "1", "--p", "1,1")[0] == 2


def test_ym_command(tmp_path):
    code, text = run("ym", "--dim", 2, "--max-arity", 3)
    assert code == 0
    assert "[INFO] n0;1,2 (not asserted): nonzero  witness:" in text
    assert run("ym", "--dim", 2, "--max-arity", 3, "--m3-variant", "printed")[0] == 1
    assert run("ym", "--dim", 2, "--max-arity", 3, "--theta3", "random")[0] == 0
    assert run("ym", "--dim", 9)[0] == 2
    p = tmp_path / "t.json"
    p.write_text(json.dumps({"theta3": [{"in": ["th+", "th+", "th+"], "out": []}]}))
    assert run("ym", "--dim", 2, "--max-arity", 3, "--theta3", p)[0] == 0
    p.write_text(json.dumps({"theta3": [{"in": ["th+", "th+", "th+"], "out": [["1/1", "th+", [[], [], []]]]}]}))
    assert run("ym", "--dim", 2, "--theta3", p)[0] == 2


def test_ym_poly_degree_domain():
    code, text = run("ym", "--dim", 2, "--poly-degree", 2, "--max-arity", 3)
    assert code == 0
