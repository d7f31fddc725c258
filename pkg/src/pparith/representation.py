"""Arithmetic formulas representing primitive recursive functions.

``represent(f)`` builds F(x1..xk, y) over ``=``, ``+``, ``*``, ``~``, ``&``,
``=>`` and quantifiers such that ``F(k, m)`` is true exactly when
``f(k) = m``.  Recursion is removed with the sequence-element function
``beta``: a PrimRec value ``h(xs, n)`` is the last entry of a trace
``v0..vn`` whose code pair ``(c, d)`` is existentially quantified::

    (Ec)(Ed)( (Ev0)(B(c,d,0,v0) & Base(xs,v0))
              & (Ai)((Ew)((i+(w+1))=n) => (Ev)(Ev1)(B(c,d,i,v) & B(c,d,i+1,v1) & Step(xs,i,v,v1)))
              & B(c,d,n,y) )

Composition introduces one existential per inner function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .derive import NotDerivableByThisGenerator, witness_proof
from .kernel import Proof, check
from .primrec import Comp, PrfFn, PrimRec, Proj, SuccFn, ZeroFn, evaluate
from .semantics import TruthVerdict, beta, beta_formula, eval_closed
from .syntax import (
    Add, And, Eq, Exists, ForAll, Formula, Implies, Not, One, Term, Turnstile, Var, Zero,
    QUANTIFIERS, free_vars, numeral, substitute_many,
)

__all__ = [
    "RepresentedFn", "SizeExceeded", "represent", "verify_representation",
    "RepresentationVerdict", "find_beta_code", "DEFAULT_NODE_BUDGET",
]

DEFAULT_NODE_BUDGET = 50_000


class SizeExceeded(ValueError):
    pass


@dataclass(frozen=True)
class RepresentedFn:
    source: PrfFn
    formula: Formula
    arity: int
    # evaluation results for trace subformulas, shared across instances
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def inputs(self) -> tuple[str, ...]:
        return tuple(f"x{i}" for i in range(1, self.arity + 1))

    output = "y"

    def instance(self, args, m: int) -> Formula:
        if len(args) != self.arity:
            raise ValueError(f"expected {self.arity} arguments, got {len(args)}")
        mapping = {x: numeral(a) for x, a in zip(self.inputs, args)}
        mapping[self.output] = numeral(m)
        return substitute_many(self.formula, mapping)


class _Names:
    """Fresh bound-variable names; x and y stay reserved for the free variables."""

    def __init__(self):
        self.count: dict[str, int] = {}

    def __call__(self, stem: str) -> str:
        k = self.count.get(stem, 0) + 1
        self.count[stem] = k
        return f"{stem}{k}"


def _size(f: Formula) -> int:
    n = 0
    stack = [f]
    while stack:
        g = stack.pop()
        n += 1
        if isinstance(g, Not):
            stack.append(g.f)
        elif isinstance(g, QUANTIFIERS + (Turnstile,)):
            stack.append(g.body)
        elif not isinstance(g, Eq) and hasattr(g, "a"):
            stack.extend((g.a, g.b))
    return n


def _conj(parts: list[Formula]) -> Formula:
    f = parts[0]
    for p in parts[1:]:
        f = And(f, p)
    return f


def _exists(names, body: Formula) -> Formula:
    for v in reversed(list(names)):
        body = Exists(v, body)
    return body


def _mention(xs: list[Term], used: set[str]) -> list[Formula]:
    # trivial equations keep every input free even when the function ignores it
    return [Eq(x, x) for x in xs if isinstance(x, Var) and x.name not in used]


def _build(f: PrfFn, xs: list[Term], y: Term, fresh: _Names, budget: list[int]) -> Formula:
    budget[0] -= 1
    if budget[0] < 0:
        raise SizeExceeded("representing formula exceeds the node budget")
    t = type(f)
    if t is ZeroFn:
        return _conj([Eq(y, Zero())] + _mention(xs, set()))
    if t is SuccFn:
        return Eq(y, Add(xs[0], One()))
    if t is Proj:
        x = xs[f.index - 1]
        used = {x.name} if isinstance(x, Var) else set()
        return _conj([Eq(y, x)] + _mention(xs, used))
    if t is Comp:
        zs = [fresh("z") for _ in f.inners]
        parts = [_build(g, xs, Var(z), fresh, budget) for g, z in zip(f.inners, zs)]
        parts.append(_build(f.outer, [Var(z) for z in zs], y, fresh, budget))
        if not zs:
            parts += _mention(xs, set())
        return _exists(zs, _conj(parts))
    if t is PrimRec:
        args, n = xs[:-1], xs[-1]
        c, d, i, w = fresh("c"), fresh("d"), fresh("i"), fresh("w")
        v0, v, v1 = fresh("v"), fresh("v"), fresh("v")
        C, D, I = Var(c), Var(d), Var(i)
        base = Exists(v0, And(beta_formula(C, D, Zero(), Var(v0)),
                              _build(f.base, args, Var(v0), fresh, budget)))
        guard = Exists(w, Eq(Add(I, Add(Var(w), One())), n))
        step = Exists(v, Exists(v1, _conj([
            beta_formula(C, D, I, Var(v)),
            beta_formula(C, D, Add(I, One()), Var(v1)),
            _build(f.step, args + [I, Var(v)], Var(v1), fresh, budget),
        ])))
        last = beta_formula(C, D, n, y)
        return Exists(c, Exists(d, _conj([base, ForAll(i, Implies(guard, step)), last])))
    raise TypeError(f"cannot represent {f!r}")


def represent(f: PrfFn, node_budget: int = DEFAULT_NODE_BUDGET) -> RepresentedFn:
    if f.arity < 1:
        raise ValueError("represented functions have arity >= 1")
    xs = [Var(f"x{i}") for i in range(1, f.arity + 1)]
    formula = _build(f, xs, Var("y"), _Names(), [node_budget])
    if _size(formula) > node_budget:
        raise SizeExceeded(f"representing formula has {_size(formula)} nodes, budget {node_budget}")
    return RepresentedFn(f, formula, f.arity)


# ---------------------------------------------------------------- verification

@dataclass
class RepresentationVerdict:
    condition: str  # "ConditionI", "ConditionII" or "Undetermined"
    expected: str  # the condition the function's value calls for
    value: int
    semantic: bool | None
    syntactic: bool | None  # None when the instance is outside the proof generator's fragment
    detail: str = ""
    proof: Proof | None = field(default=None, repr=False)

    @property
    def matches(self) -> bool:
        return self.condition == self.expected

    def to_dict(self) -> dict:
        return {
            "condition": self.condition, "expected": self.expected, "value": self.value,
            "semantic_half": self.semantic, "syntactic_half": self.syntactic,
            "detail": self.detail,
            "proof_lines": len(self.proof.lines) if self.proof else None,
        }


def default_witness_bound(value: int, args) -> int:
    # trace length plus the largest value, as an exponent, capped for desk use
    return min(1 << (len(args) + max([value, *args]) + 1), 1 << 20)


def verify_representation(r: RepresentedFn, args, m: int, bound: int | None = None,
                          system="PP", table=None,
                          step_budget: int | None = None) -> RepresentationVerdict:
    """Check condition (i) (value m, F-instance) or (ii) (~F-instance) at one point."""
    args = list(args)
    if len(args) != r.arity:
        raise ValueError(f"expected {r.arity} arguments, got {len(args)}")
    value = evaluate(r.source, args)
    expected = "ConditionI" if value == m else "ConditionII"
    opposite = "ConditionII" if value == m else "ConditionI"
    point = dict(zip(r.inputs, args))
    point[r.output] = m
    open_target = r.formula if value == m else Not(r.formula)
    wb = bound if bound is not None else default_witness_bound(value, args)
    verdict: TruthVerdict = eval_closed(open_target, witness_bound=wb, table=table,
                                        env=point, memo=r._memo, step_budget=step_budget)
    syntactic = None
    proof = None
    detail = ""
    if _quantifier_free(open_target):
        inst = r.instance(args, m)
        target = inst if value == m else Not(inst)
        try:
            goal = Turnstile(target) if _is_pp(system) else target
            proof = witness_proof(goal, system, self_check=False)
            syntactic = check(proof).accepted
        except NotDerivableByThisGenerator as e:
            syntactic = False
            detail = f"no proof generated: {e}"
    else:
        detail = "syntactic half not attempted: instance has quantifiers"
    if verdict.is_true:
        condition = expected
    elif verdict.is_false:
        condition = opposite
        detail = f"instance evaluated False; {detail}".rstrip("; ")
    else:
        condition = "Undetermined"
        detail = verdict.reason
    return RepresentationVerdict(condition, expected, value, verdict.value, syntactic, detail, proof)


def _is_pp(system) -> bool:
    from .kernel import get_system
    return get_system(system).is_pp


def _quantifier_free(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, QUANTIFIERS):
            return False
        if isinstance(g, Not):
            stack.append(g.f)
        elif isinstance(g, Turnstile):
            stack.append(g.body)
        elif not isinstance(g, Eq) and hasattr(g, "a"):
            stack.extend((g.a, g.b))
    return True


def _crt(residues, moduli):
    """Least c with c = r_i (mod m_i) for all i, or None; moduli need not be coprime."""
    c, m = 0, 1
    for r, n in zip(residues, moduli):
        g = math.gcd(m, n)
        if (r - c) % g:
            return None
        # c + m*t = r (mod n)
        t = ((r - c) // g * pow(m // g, -1, n // g)) % (n // g) if n // g > 1 else 0
        c += m * t
        m = m // g * n
        c %= m
    return c


def find_beta_code(seq, max_d: int = 100_000) -> tuple[int, int] | None:
    """``(c, d)`` with ``beta(c, d, i) == seq[i]`` for all i: least d, then least c."""
    seq = list(seq)
    for d in range(max_d + 1):
        moduli = [1 + (i + 1) * d for i in range(len(seq))]
        if any(s >= n for s, n in zip(seq, moduli)):
            continue
        c = _crt(seq, moduli)
        if c is not None:
            assert all(beta(c, d, i) == s for i, s in enumerate(seq))
            return c, d
    return None
