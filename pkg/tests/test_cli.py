import json

import pytest

from pparith.cli import run
from pparith.corpus import hand_proofs
from pparith.kernel import format_proof


def _run(*argv, env=None):
    code, text = run(list(argv), environ=env or {})
    return code, (json.loads(text) if text.lstrip().startswith("{") else text)


@pytest.fixture
def proofs(tmp_path):
    out = {}
    for name, p in hand_proofs().items():
        path = tmp_path / f"{name}.proof"
        path.write_text(format_proof(p))
        out[name] = str(path)
    return out


def test_parse_command():
    code, rep = _run("parse", "(Ax)|=PP((x+0)=x)")
    item = rep["results"]["formulas"][0]
    assert code == 0 and item["wff"] and item["pp_wff"] and item["free_vars"] == []
    code, rep = _run("parse", "(Ax)((x+0)=x)", "--system", "pp")
    assert code == 0 and rep["results"]["formulas"][0]["pp_wff"] is False


def test_parse_error_exit_2():
    code, rep = _run("parse", "((0=")
    assert code == 2 and "1:5" in rep["diagnostics"][0]["reason"]


def test_encode_decode_round_trip():
    code, rep = _run("encode", "((x+0)=x)")
    n = rep["results"]["formulas"][0]["code"]
    code, rep = _run("decode", n)
    assert code == 0 and rep["results"]["formula"] == "((x+0)=x)"


def test_decode_not_a_code_exit_3():
    code, rep = _run("decode", "10")
    assert code == 3 and "prime gap" in rep["diagnostics"][0]["reason"]


def test_encode_preimage_matches_build_gus():
    _, enc = _run("encode", "(Ay)|=PP(~Q(x,y))")
    _, gus = _run("build-gus", "--sample-bound", "50")
    assert enc["results"]["formulas"][0]["code"] == gus["results"]["diagonal"]["p"]


def test_proof_encode_decode(proofs):
    code, rep = _run("encode", proofs["pa-induction"], "--proof", "--system", "pa")
    assert code == 0
    code, back = _run("decode", rep["results"]["code"])
    assert code == 0 and len(back["results"]["lines"]) == 6


def test_check_proof_exit_codes(proofs):
    assert _run("check-proof", proofs["pp3-axiom"])[0] == 0
    assert _run("check-proof", proofs["pa-generalisation"], "--system", "pa")[0] == 0
    code, rep = _run("check-proof", proofs["pa-generalisation"], "--system", "pp")
    assert code == 1 and rep["diagnostics"][0]["status"] == "FAIL"


def test_diff_systems(tmp_path):
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("((x+0)=x)\n")
    code, rep = _run("diff-systems", str(seeds), "--depth", "1")
    r = rep["results"]
    assert code == 0 and r["pp_subset_of_pp_plus"]
    assert "(Ax)((x+0)=x)" in r["pa_generalized_not_in_pp"] or r["pa_generalized_not_in_pp"]
    assert r["semantic_effectiveness"] and r["syntactic_effectiveness"]


def test_diff_systems_figure(tmp_path):
    code, rep = _run("diff-systems", "--depth", "1", "--figures", str(tmp_path / "figs"))
    assert code == 0
    path = rep["results"]["figures"][0]
    assert path.endswith(".png") and (tmp_path / "figs" / "diff_systems_sizes.png").stat().st_size > 0


def test_build_gus_report():
    code, rep = _run("build-gus", "--sample-bound", "100", "--system", "pa")
    assert code == 0
    assert rep["results"]["diagonal"]["pre_image"] == "(Ay)(~Q(x,y))"
    assert rep["results"]["case_report"]["undecidability"]["gus"] == "not decided at this bound"


def test_verify_representation_exit_codes():
    assert _run("verify-representation", "factorial", "3")[0] == 0
    assert _run("verify-representation", "successor", "3", "--expected", "5")[0] == 0
    code, rep = _run("verify-representation", "factorial", "5", "--witness-bound", "1")
    assert code in (0, 5)
    assert _run("verify-representation", "nosuch", "1")[0] == 2


def test_semantic_mismatch_exit_1(monkeypatch):
    from pparith import cli
    from pparith.representation import RepresentationVerdict

    def fake(*a, **k):
        return RepresentationVerdict("ConditionII", "ConditionI", 6, False, None, "forced")
    monkeypatch.setattr(cli, "verify_representation", fake)
    assert _run("verify-representation", "factorial", "3")[0] == 1


def test_undetermined_exit_5(monkeypatch):
    from pparith import cli
    from pparith.representation import RepresentationVerdict

    def fake(*a, **k):
        return RepresentationVerdict("Undetermined", "ConditionI", 6, None, None, "bound")
    monkeypatch.setattr(cli, "verify_representation", fake)
    assert _run("verify-representation", "factorial", "3")[0] == 5


def test_invariant_violation_exit_4(monkeypatch):
    from pparith import cli
    from pparith.diagonal import DiagonalResult
    monkeypatch.setattr(DiagonalResult, "invariant_failures", lambda self: ["forced"])
    assert _run("build-gus", "--sample-bound", "5")[0] == 4


def test_precedence_flags_env_defaults():
    _, rep = _run("parse", "(0=0)")
    assert rep["config"]["system"] == "PP" and rep["config"]["depth"] == 2
    _, rep = _run("parse", "(0=0)", env={"PPARITH_SYSTEM": "pa", "PPARITH_DEPTH": "3"})
    assert rep["config"]["system"] == "PA" and rep["config"]["depth"] == 3
    _, rep = _run("parse", "(0=0)", "--system", "pp+", env={"PPARITH_SYSTEM": "pa"})
    assert rep["config"]["system"] == "PP+"


def test_bad_config_rejected():
    with pytest.raises(SystemExit) as e:
        run(["parse", "(0=0)", "--depth", "9"], environ={})
    assert e.value.code == 2


def test_markdown_format():
    code, text = run(["parse", "(0=0)", "--format", "markdown"], environ={})
    assert code == 0 and text.startswith("# pparith parse")
