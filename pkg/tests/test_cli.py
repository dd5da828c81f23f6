import json

import pytest

from descent_quiver import cli, verify
from descent_quiver.quiver import QuiverGraph, closed_form_quiver_B


def run(capsys, *args):
    code = cli.main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_closed_form_dot(capsys):
    code, out, _ = run(capsys, "closed-form", "--type", "A", "--rank", "7", "--format", "dot")
    assert code == 0
    assert out.startswith("digraph") and '"3211" -> "421";' in out


def test_closed_form_json_roundtrip(capsys):
    code, out, _ = run(capsys, "closed-form", "--type", "B", "--rank", "6", "--format", "json")
    assert code == 0
    g = QuiverGraph.from_json(out)
    assert len(g.vertices) == 30 and g.multiplicity("321", "6") == 2
    assert g == closed_form_quiver_B(6)


def test_closed_form_has_no_guardrail(capsys):
    code, out, _ = run(capsys, "closed-form", "--type", "A", "--rank", "12", "--format", "text")
    assert code == 0 and out.startswith("vertices:")


def test_reverse(capsys):
    _, out, _ = run(capsys, "closed-form", "--type", "B", "--rank", "6", "--format", "json", "--reverse")
    assert QuiverGraph.from_json(out).multiplicity("6", "321") == 2


def test_verify_full_a3(capsys):
    code, out, err = run(capsys, "verify", "--type", "A", "--rank", "3", "--level", "full", "--workers", "1")
    assert code == 0
    report = json.loads(out)
    assert report["ok"] and report["level"] == "full"
    assert {c["status"] for c in report["checks"]} <= {"pass", "skip"}
    assert "time" not in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    broken = verify.Check("always_fails", "fast", lambda ws: {"ok": False, "why": "forced"})
    monkeypatch.setattr(verify, "CHECKS", verify.CHECKS + (broken,))
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "2", "--workers", "1")
    assert code == 1
    report = json.loads(out)
    assert not report["ok"]
    assert report["checks"][-1] == {"name": "always_fails", "status": "fail", "detail": {"ok": False, "why": "forced"}}


def test_crashing_check_is_reported(capsys, monkeypatch):
    def boom(ws):
        raise RuntimeError("kaput")

    monkeypatch.setattr(verify, "CHECKS", (verify.Check("boom", "fast", boom),))
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "2", "--format", "text", "--workers", "1")
    assert code == 1 and "FAIL boom" in out


def test_guardrail_refusal_and_force(capsys, monkeypatch):
    code, out, err = run(capsys, "verify", "--type", "A", "--rank", "6")
    assert code == 2 and out == "" and "--force" in err
    monkeypatch.setitem(verify.GUARDRAILS, "fast", {"A": 2, "B": 2})
    code, _, _ = run(capsys, "verify", "--type", "A", "--rank", "3", "--workers", "1")
    assert code == 2
    code, out, _ = run(capsys, "verify", "--type", "A", "--rank", "3", "--workers", "1", "--force")
    assert code == 0 and json.loads(out)["ok"]


def test_compute_guardrail(capsys):
    code, _, err = run(capsys, "quiver-descent", "--type", "B", "--rank", "5")
    assert code == 2 and "refusing" in err


@pytest.mark.parametrize(
    "args",
    [
        ("bogus", "--type", "A", "--rank", "3"),
        ("faces", "--type", "C", "--rank", "3"),
        ("faces", "--type", "A"),
        ("faces", "--type", "A", "--rank", "0"),
        ("faces", "--type", "A", "--rank", "3", "--workers", "0"),
        ("idempotents", "--type", "A", "--rank", "3", "--format", "dot"),
        ("verify", "--type", "A", "--rank", "3", "--level", "huge"),
    ],
)
def test_usage_errors(capsys, args):
    code, out, err = run(capsys, *args)
    assert code == 2 and out == "" and err


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0


@pytest.mark.parametrize("fmt", ["json", "text", "dot"])
def test_faces_and_lattice(capsys, fmt):
    code, out, _ = run(capsys, "faces", "--type", "A", "--rank", "3", "--format", fmt)
    assert code == 0
    if fmt == "json":
        assert len(json.loads(out)) == 13
    code, out, _ = run(capsys, "lattice", "--type", "A", "--rank", "3", "--format", fmt)
    assert code == 0
    if fmt == "json":
        data = json.loads(out)
        assert len(data["flats"]) == 5 and sorted(o["label"] for o in data["orbits"]) == ["111", "21", "3"]


def test_idempotents_json(capsys):
    code, out, _ = run(capsys, "idempotents", "--type", "B", "--rank", "2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["system"] == "first" and all(data["verification"].values())
    assert len(data["idempotents"]) == 6


def test_quiver_kf(capsys):
    code, out, _ = run(capsys, "quiver-kf", "--type", "A", "--rank", "3", "--format", "json")
    assert code == 0
    assert len(QuiverGraph.from_json(out).arrows) == 6


def test_quiver_descent_matches_closed_form(capsys):
    _, a, _ = run(capsys, "quiver-descent", "--type", "B", "--rank", "3", "--format", "json")
    _, b, _ = run(capsys, "closed-form", "--type", "B", "--rank", "3", "--format", "json")
    assert QuiverGraph.from_json(a) == QuiverGraph.from_json(b)


def test_output_file(capsys, tmp_path):
    target = tmp_path / "q.dot"
    code, out, _ = run(capsys, "closed-form", "--type", "A", "--rank", "5", "--format", "dot", "--output", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("digraph")


def test_logging_goes_to_stderr(capsys):
    code, out, err = run(capsys, "faces", "--type", "A", "--rank", "2", "--format", "json", "-v")
    assert code == 0
    json.loads(out)


def test_workers_env(monkeypatch):
    monkeypatch.setenv(verify.WORKERS_ENV, "3")
    assert verify.default_workers() == 3
    monkeypatch.delenv(verify.WORKERS_ENV)
    assert verify.default_workers() >= 1
