import random

import pytest
from hypothesis import given

from conftest import seeds
from pparith.corpus import random_closed_qf
from pparith.derive import (
    MAX_SEARCH_DEPTH, NotDerivableByThisGenerator, SearchLimitExceeded, search, witness_proof,
)
from pparith.kernel import PP_AXIOMS, check, normalize
from pparith.semantics import eval_closed
from pparith.syntax import ForAll, Not, Turnstile, parse


@pytest.mark.parametrize("goal", [
    "((0+1)+0)=(0+1)",
    "~(0=(0+1))",
    "((((0+1)+1)*(0+1))=((0+1)+1))",
    "(((0+1)+(0+1))=((0+1)+1))",
    "((0=(0+1))|(0=0))",
])
@pytest.mark.parametrize("system", ["PP", "PP+", "PA"])
def test_witness_proofs(goal, system):
    f = parse(goal)
    target = Turnstile(f) if system != "PA" else f
    p = witness_proof(target, system)
    assert check(p).accepted
    assert p.conclusion == target


def test_false_or_open_goals_refused():
    with pytest.raises(NotDerivableByThisGenerator):
        witness_proof(parse("(0=(0+1))"), "PA")
    with pytest.raises(NotDerivableByThisGenerator):
        witness_proof(parse("(x=x)"), "PA")
    with pytest.raises(NotDerivableByThisGenerator):
        witness_proof(Turnstile(parse("(0=0)")), "PA")


@given(seeds)
def test_generated_proofs_check(seed):
    rng = random.Random(seed)
    goal = random_closed_qf(rng, depth=2, max_value=3)
    if not eval_closed(goal).is_true:
        goal = Not(goal)
    try:
        p = witness_proof(goal, "PA")
    except NotDerivableByThisGenerator:
        return
    assert check(p).accepted


def test_search_depth_zero_has_axioms():
    got = set(search("PP", (), 0))
    assert set(PP_AXIOMS.values()) <= got


@pytest.mark.parametrize("seed_text", [(), ("((x+0)=x)",), ("(0=0)", "((x+y)=(y+x))")])
def test_search_monotone(seed_text):
    seeds_ = [parse(s) for s in seed_text]
    for d in range(MAX_SEARCH_DEPTH + 1):
        assert set(search("PP", seeds_, d)) <= set(search("PP+", seeds_, d))


def test_search_generalises_in_pa():
    got = search("PA", [parse("((x+0)=x)")], 1)
    assert parse("(Ax)((x+0)=x)") in got
    pp = {normalize(f) for f in search("PP", [parse("((x+0)=x)")], 1)}
    assert normalize(parse("(Ax)((x+0)=x)")) in pp  # PP3 itself, modulo the turnstile
    gen_pa = {f for f in got if isinstance(f, ForAll)}
    assert any(normalize(f) not in pp for f in gen_pa)


def test_search_is_deterministic_and_bounded():
    assert search("PA", (), 2) == search("PA", (), 2)
    with pytest.raises(SearchLimitExceeded):
        search("PP", (), MAX_SEARCH_DEPTH + 1)
    with pytest.raises(SearchLimitExceeded):
        search("PA", (), 2, formula_cap=10)


def test_search_results_are_sound():
    for f in search("PP+", (), 3):
        assert eval_closed(normalize(f), 50).value is not False
