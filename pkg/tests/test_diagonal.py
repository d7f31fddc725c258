import pytest

from pparith.codec import CodecError, SymbolTable, decode_formula, encode_formula, encode_proof
from pparith.diagonal import NOT_DECIDED, diagonalize, gus_case_report, register_Q
from pparith.semantics import eval_closed, eval_term
from pparith.syntax import free_vars, is_proposition, numeral, parse, print_formula, substitute


def _table(system="PP"):
    t = SymbolTable()
    register_Q(system, t)
    return t


def test_registration():
    t = _table()
    assert parse("(Ay)|=PP(~Q(x,y))", t)
    with pytest.raises(CodecError):
        register_Q("PP", t)


def test_Q_delegates_to_q():
    t = _table()
    assert eval_closed(parse("Q(0,0)", t), table=t).is_false
    h_formula = parse("|=PP((z+0)=z)")
    h = encode_formula(h_formula, t)
    j = encode_proof([parse("(Ax)|=PP((x+0)=x)"), substitute(h_formula, "z", numeral(h))], t)
    entry = t.predicates["Q"]
    assert entry.evaluator(h, j) is True


def test_unregistered_Q():
    with pytest.raises(CodecError):
        diagonalize("PP", SymbolTable())


@pytest.mark.parametrize("system,text", [
    ("PP", "(Ay)|=PP(~Q(x,y))"), ("PP+", "(Ay)|=PP(~Q(x,y))"), ("PA", "(Ay)(~Q(x,y))"),
])
def test_fixed_point(system, text):
    t = _table(system)
    r = diagonalize(system, t)
    assert print_formula(r.pre_image) == text
    assert free_vars(r.pre_image) == {"x"}
    assert decode_formula(r.p, t) == r.pre_image
    assert r.gus == substitute(r.pre_image, "x", numeral(r.p))
    assert is_proposition(r.gus)
    assert eval_term(numeral(r.p)) == r.p
    assert r.invariant_failures() == []


def test_p_is_stable():
    assert diagonalize("PP", _table()).p == diagonalize("PP", _table()).p


def test_case_report():
    r = diagonalize("PP", _table())
    rep = gus_case_report(r, 2000)
    assert rep.hits == [] and not rep.proof_found
    assert rep.ppr3["PP+"] == "enabled" and rep.ppr3["PP"] == "disabled"
    assert rep.undecidability == {"gus": NOT_DECIDED, "not_gus": NOT_DECIDED}
    assert rep.gus_eval.startswith("unknown")
    assert any("abbreviation" in n for n in rep.notes)
