import random

import pytest
from hypothesis import given

from conftest import seeds
from pparith.corpus import hand_proofs, mutate_formulas, proof_corpus
from pparith.kernel import (
    KernelError, Proof, ProofLine, Rule, axiom_instance, check, check_formulas, format_proof,
    get_system, justify, parse_proof,
)
from pparith.syntax import Var, parse, print_formula

CORPUS = proof_corpus(seed=11, count=24)


def test_axiom_instance_oracles():
    x, a, b = Var("x"), Var("a"), Var("b")
    assert axiom_instance("PA", "GP1", [x]) == parse("~(0=(x+1))")
    assert axiom_instance("PP", "PP5") == parse("(Ax)|=PP((x*0)=0)")
    assert axiom_instance("PA", "GP6", [a, b]) == parse("(a*(b+1))=((a*b)+a)")
    with pytest.raises(KernelError):
        axiom_instance("PP", "GP1", [x])
    with pytest.raises(KernelError):
        axiom_instance("PA", "GP6", [a])
    with pytest.raises(KernelError):
        axiom_instance("PP", "PP9")


def test_systems():
    assert set(get_system("PP").rules) < set(get_system("pp+").rules)
    assert get_system("PP+").enables("PPR3") and not get_system("PP").enables("PPR3")
    with pytest.raises(KernelError):
        get_system("ZF")


def test_one_line_axiom_proof():
    assert check(hand_proofs()["pp3-axiom"]).accepted


def test_generalisation_only_in_pa():
    p = hand_proofs()["pa-generalisation"]
    assert check(p).accepted
    for name in ("PP", "PP+"):
        v = check(Proof(p.lines, get_system(name)))
        assert not v.accepted
        assert "GP3 is not an axiom" in v.diagnostics[0].reason


def test_numeral_pattern_rule_needs_pp_plus():
    p = hand_proofs()["pp-plus-numeral-pattern"]
    assert check(p).accepted
    v = check(Proof(p.lines, get_system("PP")))
    assert not v.accepted
    assert v.first_failure == 1
    assert "rule not enabled" in v.diagnostics[1].reason
    assert not check(Proof(p.lines, get_system("PA"))).accepted


def test_every_hand_proof_is_accepted():
    for name, p in hand_proofs().items():
        assert check(p).accepted, name


def test_premise_indices_must_point_backwards():
    p = hand_proofs()["pp-mp-under-prefix"]
    lines = list(p.lines)
    lines[2] = ProofLine(lines[2].formula, Rule("PPR1", (0, 2)))
    v = check(Proof(lines, p.system))
    assert not v.accepted and v.first_failure == 2


def test_monotonicity_pp_to_pp_plus():
    for p in CORPUS:
        if p.system.name == "PP":
            assert check(Proof(p.lines, get_system("PP+"))).accepted


def test_justify_reconstructs_corpus():
    for p in CORPUS:
        assert check_formulas(p.formulas, p.system).accepted
        assert all(j is not None for j in justify(p.formulas, p.system))


def test_format_and_parse_round_trip():
    for p in CORPUS[:10]:
        q = parse_proof(format_proof(p), p.system)
        assert q.formulas == p.formulas
        assert [str(ln.justification) for ln in q.lines] == [str(ln.justification) for ln in p.lines]


def test_parse_proof_errors():
    with pytest.raises(KernelError):
        parse_proof("1 | (0=0) | LOG EQREFL", "PA")
    with pytest.raises(KernelError):
        parse_proof("0 | (0=0)", "PA")
    with pytest.raises(KernelError):
        parse_proof("# only a comment", "PA")


@given(seeds)
def test_single_mutations_are_diagnosed(seed):
    rng = random.Random(seed)
    p = CORPUS[rng.randrange(len(CORPUS))]
    mutated, label = mutate_formulas(p.formulas, rng)
    if mutated == p.formulas:
        return
    v = check_formulas(mutated, p.system)
    if v.accepted:
        # a mutation may land on another valid proof; then it must still be sound
        from pparith.semantics import eval_closed
        from pparith.syntax import strip_turnstiles
        assert eval_closed(strip_turnstiles(mutated[-1]), 1000).value is not False
    else:
        first_changed = next(i for i, (a, b) in enumerate(zip(mutated, p.formulas)) if a != b) \
            if len(mutated) == len(p.formulas) else 0
        assert v.first_failure >= min(first_changed, len(mutated) - 1) or label.startswith("drop")


def test_mutated_justification_diagnosed_at_or_after_line():
    p = hand_proofs()["pa-induction"]
    for i in range(1, len(p.lines)):
        lines = list(p.lines)
        j = lines[i].justification
        if isinstance(j, Rule):
            bad = Rule(j.rule, tuple(max(k - 1, 0) if k else 1 for k in j.premises))
            v = check(Proof(lines[:i] + [ProofLine(lines[i].formula, bad)] + lines[i + 1:], p.system))
            if not v.accepted:
                assert v.first_failure >= i


def test_check_is_deterministic():
    p = CORPUS[5]
    assert check(p) == check(p)
    assert print_formula(p.conclusion)
