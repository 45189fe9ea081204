import json
import subprocess
import sys

import pytest

from vistrace import chain_visibility, load_manifest
from vistrace.cli import main
from vistrace.metrics import format_fixed

from conftest import GOLDEN, ROOT, fixture_path, load_chain


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_score_table3_golden(capsys):
    code, out, _ = run(capsys, "score", fixture_path("table3"))
    assert code == 0
    assert out == (GOLDEN / "score_table3.txt").read_text()
    assert out.splitlines()[-1] == "Overall VIS for model 3.67"


def test_score_as_installed_module():
    proc = subprocess.run(
        [sys.executable, "-m", "vistrace", "score", "fixtures/table3.json"], cwd=ROOT, capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "score_table3.txt").read_text()


def test_score_table7_modes(capsys):
    _, out, _ = run(capsys, "score", fixture_path("table7"))
    assert out.splitlines()[-1] == "Overall VIS for model 2.56"
    _, out, _ = run(capsys, "score", fixture_path("table7"), "--paper-compat")
    assert "(paper-compat)" in out.splitlines()[0]


@pytest.mark.parametrize("name", ["table3", "table4", "table6", "table8"])
def test_rows_match_printed_tables(capsys, name):
    printed = {
        # Node, Quantity, Freshness, Accuracy, VISQual, VIS as they appear in the source tables
        "table3": [("DS", 3, 3, 3, "3", "3"), ("H1", 4, 4, 4, "4", "4"), ("H2", 4, 4, 4, "4", "4")],
        "table4": [("DS", 3, 2, 3, "2.45", "2.71"), ("H1", 3, 3, 3, "3", "3"), ("H2", 3, 3, 3, "3", "3")],
        "table6": [("DS", 4, 3, 3, "3", "3.46"), ("H1", 4, 3, 3, "3", "3.46"), ("H2", 4, 3, 3, "3", "3.46")],
        # DS1 VIS is printed as 2.73 in the source; the formulas give 2.71
        "table8": [("DS1", 3, 2, 3, "2.45", "2.71"), ("DS2", 3, 1, 3, "1.73", "2.28"),
                   ("H1", 4, 3, 3, "3", "3.46"), ("H2", 4, 4, 4, "4", "4")],
    }[name]
    _, out, _ = run(capsys, "score", fixture_path(name), "--format", "json")
    rows = [
        (n["id"], n["quantity"], n["freshness"], n["accuracy"], n["vis_quality"], n["vis"])
        for n in json.loads(out)["nodes"]
    ]
    assert [r[:4] for r in rows] == [p[:4] for p in printed]
    for r, p in zip(rows, printed):
        assert format_fixed(r[4]) == format_fixed(float(p[4]))
        assert format_fixed(r[5]) == format_fixed(float(p[5]))


@pytest.mark.parametrize("name", ["table3", "table7", "table8", "transfer", "weighted"])
@pytest.mark.parametrize("compat", [False, True])
def test_json_matches_library_exactly(capsys, name, compat):
    argv = ["score", fixture_path(name), "--format", "json"] + (["--paper-compat"] if compat else [])
    _, out, _ = run(capsys, *argv)
    payload = json.loads(out)
    chain = load_chain(name)
    score = chain_visibility(chain, load_manifest(fixture_path(name)).weights, "paper-compat" if compat else "full-precision")
    assert payload["overall_vis"] == score.vis
    assert [n["vis"] for n in payload["nodes"]] == [s.vis for s in score.node_scores]
    assert payload["weights"] == dict(score.weights)
    assert payload["mode"] == score.mode.value


@pytest.mark.parametrize("name", ["table4", "table7", "table8"])
def test_formats_agree(capsys, name):
    _, text, _ = run(capsys, "score", fixture_path(name))
    _, md, _ = run(capsys, "score", fixture_path(name), "--format", "markdown")
    _, js, _ = run(capsys, "score", fixture_path(name), "--format", "json")
    payload = json.loads(js)
    for n in payload["nodes"]:
        for value in (n["vis_quality"], n["vis"]):
            assert format_fixed(value) in text and format_fixed(value) in md
    overall = format_fixed(payload["overall_vis"])
    assert text.splitlines()[-1] == f"Overall VIS for model {overall}"
    assert f"**{overall}**" in md.splitlines()[-1]


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "score", fixture_path("table7"), "--precision", "4")
    assert "2.5567" in out and "1.3161" in out


def test_custom_weights_file(capsys, tmp_path):
    weights = tmp_path / "w.json"
    weights.write_text(json.dumps({"DS": 0.0, "H1": 0.0, "H2": 1.0}))
    code, out, _ = run(capsys, "score", fixture_path("table7"), "--weights", weights)
    assert code == 0 and out.splitlines()[-1] == "Overall VIS for model 3.13"
    weights.write_text(json.dumps({"DS": 0.5}))
    code, _, err = run(capsys, "score", fixture_path("table7"), "--weights", weights)
    assert code == 2 and "E_BAD_WEIGHTS" in err
    weights.write_text("{")
    assert run(capsys, "score", fixture_path("table7"), "--weights", weights)[0] == 3


def test_sub_manifest_reported_not_merged(capsys):
    _, out, _ = run(capsys, "score", fixture_path("transfer"), "--format", "json")
    payload = json.loads(out)
    assert payload["sub_manifests"][0]["node"] == "M_basis"
    assert payload["sub_manifests"][0]["overall_vis"] == chain_visibility(load_chain("table8")).vis
    assert payload["overall_vis"] == chain_visibility(load_chain("transfer")).vis


@pytest.mark.parametrize(
    "name, code, token",
    [("bad_cycle", 2, "E_CYCLE"), ("bad_missing_judgement", 2, "E_MISSING_JUDGEMENT"),
     ("bad_syntax", 3, "E_SYNTAX"), ("bad_version", 3, "E_VERSION"), ("does_not_exist", 3, "E_IO")],
)
def test_score_failures(capsys, name, code, token):
    rc, out, err = run(capsys, "score", fixture_path(name))
    assert rc == code and token in err and out == ""


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("table3"))
    assert code == 0 and out.strip() == "OK (0 errors, 0 warnings)"
    code, out, _ = run(capsys, "validate", fixture_path("internal_judgement"))
    assert code == 0 and "W_INTERNAL_JUDGEMENT" in out
    code, out, _ = run(capsys, "validate", fixture_path("internal_judgement"), "--strict")
    assert code == 2 and "error W_INTERNAL_JUDGEMENT" in out
    code, out, _ = run(capsys, "validate", fixture_path("bad_missing_judgement"))
    assert code == 2 and "E_MISSING_JUDGEMENT" in out
    code, out, _ = run(capsys, "validate", fixture_path("bad_cycle"), "--format", "json")
    assert code == 2 and json.loads(out)["errors"][0]["code"] == "E_CYCLE"
    assert run(capsys, "validate", fixture_path("bad_syntax"))[0] == 3


def test_rank(capsys):
    code, out, _ = run(capsys, "rank", fixture_path("table6"), fixture_path("table5"), "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert [(r["rank"], r["path"].rsplit("/", 1)[-1]) for r in rows] == [(1, "table6.json"), (2, "table5.json")]
    code, out, _ = run(capsys, "rank", fixture_path("table3"))
    assert code == 0 and out.splitlines()[1].startswith("1 ")
    _, out, _ = run(capsys, "rank", fixture_path("table7"), fixture_path("table4"), "--format", "json")
    assert [r["path"].rsplit("/", 1)[-1] for r in json.loads(out)] == ["table4.json", "table7.json"]


def test_rank_ties_and_failures(capsys):
    code, out, err = run(
        capsys, "rank", fixture_path("table4"), fixture_path("bad_cycle"), fixture_path("table3"),
        fixture_path("table3"), fixture_path("bad_syntax"), "--format", "json",
    )
    assert code == 3
    assert "E_CYCLE" in err and "E_SYNTAX" in err
    assert [r["rank"] for r in json.loads(out)] == [1, 2, 3]
    code, _, _ = run(capsys, "rank", fixture_path("table3"), fixture_path("bad_cycle"))
    assert code == 2


def test_explain(capsys):
    code, out, _ = run(capsys, "explain", fixture_path("table7"), "--node", "H2")
    assert code == 0
    assert "Quantity   4  Sufficient to validate" in out
    assert "Freshness  2  Out-of-date" in out
    assert "Accuracy   3  Believed to be accurate" in out
    assert out.rstrip().endswith("= 3.13")
    assert "rationale:" in out and "Evidence:" in out
    code, out, _ = run(capsys, "explain", fixture_path("table5"), "--node", "DS")
    assert code == 0
    for anchor in ("Sparse or insufficient information", "Never updated", "Believed to be accurate"):
        assert anchor in out
    assert f"= {format(1.3160740129524924, '.2f')}" in out


def test_explain_rejects(capsys):
    code, _, err = run(capsys, "explain", fixture_path("table7"), "--node", "LD")
    assert code == 2 and "E_NOT_LEAF" in err
    code, _, err = run(capsys, "explain", fixture_path("table7"), "--node", "ZZ")
    assert code == 2 and "E_UNKNOWN_NODE" in err


@pytest.mark.parametrize(
    "name, minimum, expected",
    [("table6", "3.0", 0), ("table5", "2.5", 1), ("table3", "4.0", 1), ("table3", "3.6", 0)],
)
def test_gate(capsys, name, minimum, expected):
    code, out, _ = run(capsys, "gate", fixture_path(name), "--min", minimum)
    assert code == expected
    assert out.startswith("PASS" if expected == 0 else "FAIL")


def test_gate_compat_and_bad_min(capsys):
    # full precision 2.5567 passes 2.555; the 2-dp-rounded aggregate 2.5567 also passes
    assert run(capsys, "gate", fixture_path("table7"), "--min", "2.555")[0] == 0
    assert run(capsys, "gate", fixture_path("table7"), "--min", "2.555", "--paper-compat")[0] == 0
    with pytest.raises(SystemExit) as exc:
        main(["gate", str(fixture_path("table3")), "--min", "5"])
    assert exc.value.code == 2
    assert run(capsys, "gate", fixture_path("bad_cycle"), "--min", "1")[0] == 2


def test_suggest_freshness(capsys, tmp_path):
    code, out, _ = run(capsys, "suggest-freshness", fixture_path("table4"), "--as-of", "2023-06-01", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    rows = {r["node"]: r for r in payload["suggestions"]}
    # evidence dated 2017-05-01 is six years old on 2023-06-01
    assert rows["DS"]["suggested"] == 1 and rows["DS"]["declared"] == 2 and rows["DS"]["conflicts_with_declared"]
    assert rows["H1"]["suggested"] == 1 and rows["H1"]["conflicts_with_declared"]

    _, out, _ = run(capsys, "suggest-freshness", fixture_path("table5"), "--as-of", "2023-06-01", "--format", "json")
    assert all(r["suggested"] == 1 and not r["conflicts_with_declared"] for r in json.loads(out)["suggestions"])

    _, out, _ = run(capsys, "suggest-freshness", fixture_path("table8"), "--as-of", "2020-06-01", "--format", "json")
    assert {r["node"]: r["suggested"] for r in json.loads(out)["suggestions"]}["H2"] == 4

    code, out, err = run(capsys, "suggest-freshness", fixture_path("table3"), "--as-of", "2020-01-01")
    assert code == 0 and "E_FUTURE_EVIDENCE" in err and "toolkit policy" in out

    policy = tmp_path / "p.json"
    policy.write_text(json.dumps({"fresh_window_days": 10, "stale_window_days": 20}))
    _, out, _ = run(capsys, "suggest-freshness", fixture_path("table3"), "--as-of", "2020-06-01", "--policy", policy)
    assert "within 10 days" in out
    policy.write_text(json.dumps({"fresh_window_days": 30, "stale_window_days": 20}))
    assert run(capsys, "suggest-freshness", fixture_path("table3"), "--policy", policy)[0] == 2
    assert run(capsys, "suggest-freshness", fixture_path("table3"), "--policy", tmp_path / "missing.json")[0] == 3
    assert run(capsys, "suggest-freshness", fixture_path("bad_cycle"), "--as-of", "2024-01-01")[0] == 2
