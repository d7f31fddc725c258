import itertools

import pytest
from hypothesis import given, strategies as st

from pparith.primrec import SuccFn, evaluate, library
from pparith.representation import (
    SizeExceeded, find_beta_code, represent, verify_representation,
)
from pparith.semantics import beta, eval_closed
from pparith.syntax import Turnstile, free_vars, iter_subformulas

LIB = library()
REPS = {name: represent(LIB[name]) for name in ("successor", "addition", "multiplication", "factorial")}


def test_formula_shape():
    for r in REPS.values():
        assert free_vars(r.formula) == set(r.inputs) | {"y"}
        assert not any(isinstance(g, Turnstile) for g in iter_subformulas(r.formula))


def test_successor_instances():
    r = represent(SuccFn())
    assert eval_closed(r.instance([3], 4)).is_true
    assert eval_closed(r.instance([3], 5)).is_false


def test_addition_instances():
    r = REPS["addition"]
    assert eval_closed(r.instance([2, 3], 5), witness_bound=2**10).is_true
    assert eval_closed(r.instance([2, 3], 6), witness_bound=2**10).is_false


def test_factorial_conditions():
    r = REPS["factorial"]
    v = verify_representation(r, [3], 6, bound=10**4)
    assert v.condition == "ConditionI" and v.semantic is True
    v = verify_representation(r, [3], 7, bound=10**4)
    assert v.condition == "ConditionII" and v.semantic is True


def test_successor_both_halves():
    v = verify_representation(represent(SuccFn()), [0], 1, bound=4)
    assert v.condition == "ConditionI" and v.semantic and v.syntactic
    assert v.proof is not None


def test_undetermined_at_tiny_bound():
    r = REPS["factorial"]
    v = verify_representation(r, [4], 24, bound=1)
    assert v.condition in ("ConditionI", "Undetermined")


def test_size_budget():
    with pytest.raises(SizeExceeded):
        represent(LIB["is_prime"], node_budget=50)


def test_arity_checked():
    with pytest.raises(ValueError):
        verify_representation(REPS["addition"], [1], 1)


@pytest.mark.parametrize("name,points", [
    ("successor", [(a,) for a in (0, 1, 7, 100, 719)]),
    ("addition", [(0, 0), (2, 3), (10, 5), (360, 360), (0, 720)]),
    ("multiplication", [(0, 0), (3, 4), (6, 7), (24, 30), (1, 50)]),
    ("factorial", [(n,) for n in range(7)]),
])
def test_conditions_match_oracle(name, points):
    r = REPS[name]
    for args in points:
        value = evaluate(r.source, list(args))
        for m in (value, value + 1, max(value - 1, 0)):
            v = verify_representation(r, list(args), m)
            assert v.condition == v.expected, (args, m, v)
            assert v.semantic is True


@given(st.integers(0, 20), st.integers(0, 20))
def test_negation_coherence(a, b):
    r = REPS["addition"]
    f_true = eval_closed(r.instance([a, b], a + b), witness_bound=2**12)
    f_false = eval_closed(r.instance([a, b], a + b + 1), witness_bound=2**12)
    assert f_true.is_true and f_false.is_false


def test_beta_adequacy():
    for n in range(1, 5):
        for seq in itertools.product(range(7), repeat=n):
            c, d = find_beta_code(seq)
            assert [beta(c, d, i) for i in range(n)] == list(seq)
    assert find_beta_code([2, 3]) == (8, 2)
