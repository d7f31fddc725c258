import random

import pytest
from hypothesis import given, strategies as st

from conftest import seeds
from pparith.corpus import random_formula
from pparith.semantics import FreeVariableError, beta, beta_formula, eval_closed
from pparith.syntax import free_vars, numeral, parse, substitute_many


@pytest.mark.parametrize("text,value", [
    ("(0=0)", True),
    ("((0+1)=0)", False),
    ("(Ey)((y+1)=((0+1)+1))", True),
    ("(E!y)(y=0)", True),
    ("(Ax)|=PP((x*0)=0)", None),  # unbounded universal stays open
    ("(Ex)((x*x)=((0+1)+1))", None),
])
def test_eval_oracles(text, value):
    assert eval_closed(parse(text), witness_bound=10).value is value


def test_free_variables_rejected():
    with pytest.raises(FreeVariableError):
        eval_closed(parse("(x=0)"))


def test_env_supplies_free_variables():
    f = parse("((x+y)=((0+1)+1))")
    assert eval_closed(f, env={"x": 1, "y": 1}).is_true
    assert eval_closed(f, env={"x": 2, "y": 1}).is_false


def _close(f, rng):
    return substitute_many(f, {v: numeral(rng.randrange(4)) for v in free_vars(f)})


@given(seeds)
def test_raising_the_bound_never_flips(seed):
    rng = random.Random(seed)
    f = _close(random_formula(rng, 4), rng)
    seen = {eval_closed(f, witness_bound=b).value for b in (2, 6, 20)} - {None}
    assert len(seen) <= 1


def test_beta_oracles():
    assert beta(5, 0, 3) == 0
    assert beta(7, 2, 1) == 2
    assert free_vars(beta_formula()) == {"c", "d", "i", "v"}


def _b(c, d, i, v):
    return substitute_many(beta_formula(), {k: numeral(n) for k, n in zip("cdiv", (c, d, i, v))})


@pytest.mark.parametrize("native", [True, False])
def test_beta_formula_instances(native):
    assert eval_closed(_b(7, 2, 1, 2), native_beta=native).is_true
    assert eval_closed(_b(7, 2, 1, 3), native_beta=native).is_false


@given(st.integers(0, 60), st.integers(0, 8), st.integers(0, 4), st.integers(0, 9))
def test_beta_formula_agrees_with_beta(c, d, i, v):
    assert eval_closed(_b(c, d, i, v), native_beta=False).value == (beta(c, d, i) == v)
