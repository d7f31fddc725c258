import math

import pytest
from hypothesis import given, strategies as st

from pparith.primrec import (
    ArityError, Comp, PrimRec, Proj, SuccFn, ZeroFn, evaluate, from_text, library, to_text,
)

LIB = library()


def _sieve(n):
    flags = [False, False] + [True] * (n - 1)
    for p in range(2, int(n ** 0.5) + 1):
        if flags[p]:
            flags[p * p::p] = [False] * len(flags[p * p::p])
    return flags


def test_examples():
    assert evaluate(LIB["factorial"], [0]) == 1
    assert evaluate(LIB["factorial"], [4]) == 24
    assert evaluate(LIB["exponential"], [2, 10]) == 1024
    assert evaluate(LIB["is_prime"], [2]) == 1
    assert evaluate(LIB["is_prime"], [1]) == 0
    assert evaluate(LIB["is_prime"], [91]) == 0
    assert evaluate(LIB["quotient"], [7, 2]) == 3


def test_arity_mismatch():
    with pytest.raises(ArityError):
        evaluate(LIB["factorial"], [1, 2])


def test_constructor_arities():
    with pytest.raises(ValueError):
        Comp(SuccFn(), [Proj(1, 2), Proj(2, 2)])
    add = PrimRec(Proj(1, 1), Comp(SuccFn(), [Proj(3, 3)]))
    assert add.arity == 2
    assert evaluate(add, [3, 4]) == 7


def test_library_oracles():
    # the full primality range runs in the acceptance suite
    sieve = _sieve(200)
    assert [evaluate(LIB["factorial"], [n]) for n in range(11)] == [math.factorial(n) for n in range(11)]
    for b in range(6):
        for e in range(6):
            assert evaluate(LIB["exponential"], [b, e]) == b ** e
    for n in range(201):
        assert evaluate(LIB["is_prime"], [n]) == int(sieve[n])


@given(st.integers(0, 100), st.integers(0, 100))
def test_quotient_and_helpers(m, n):
    q = evaluate(LIB["quotient"], [m, n])
    assert q == (m // n if n else 0)
    assert evaluate(LIB["monus"], [m, n]) == max(m - n, 0)
    assert evaluate(LIB["less_than"], [m, n]) == int(m < n)


@given(st.integers(1, 400))
def test_prime_helpers(n):
    assert evaluate(LIB["predecessor"], [n]) == n - 1
    k = 2
    e = 0
    while n % k ** (e + 1) == 0:
        e += 1
    assert evaluate(LIB["prime_exponent"], [n, k]) == e


def test_nth_prime_and_sequence_length():
    assert [evaluate(LIB["nth_prime"], [i]) for i in range(6)] == [2, 3, 5, 7, 11, 13]
    assert evaluate(LIB["sequence_length"], [2 * 9]) == 2


@pytest.mark.parametrize("name", sorted(LIB))
def test_text_form_round_trips(name):
    f = LIB[name]
    assert to_text(from_text(to_text(f))) == to_text(f)


def test_predicates_return_bits():
    for name in ("is_prime", "less_than", "divides", "is_zero", "equal", "sg"):
        f = LIB[name]
        for args in [(a,) * f.arity for a in range(6)] + [tuple(range(f.arity))]:
            assert evaluate(f, list(args)) in (0, 1)


def test_zero_fn():
    assert evaluate(ZeroFn(2), [5, 6]) == 0
