"""Seeded corpora of formulas and proofs for tests and self-checks.

Everything here is a pure function of its seed.
"""

from __future__ import annotations

import random

from .derive import NotDerivableByThisGenerator, witness_proof
from .kernel import Proof, check, get_system, num_formula, parse_proof
from .semantics import eval_closed
from .syntax import (
    Add, And, Eq, Exists, ExistsUnique, ForAll, Formula, Implies, Mul, Not, One, Or, Pred,
    Turnstile, Var, Zero, formula_tokens, numeral, parse, print_formula,
)

__all__ = ["random_term", "random_formula", "random_closed_qf", "hand_proofs",
           "proof_corpus", "mutate_formulas"]

_VARS = ("x", "y", "z", "x1", "y2")


def random_term(rng: random.Random, depth: int, variables=_VARS) -> ...:
    if depth <= 0 or rng.random() < 0.3:
        pick = rng.randrange(4)
        if pick == 0 and variables:
            return Var(rng.choice(variables))
        if pick == 1:
            return numeral(rng.randrange(4))
        return Zero() if pick == 2 else One()
    cls = Add if rng.random() < 0.6 else Mul
    return cls(random_term(rng, depth - 1, variables), random_term(rng, depth - 1, variables))


def random_formula(rng: random.Random, depth: int, variables=_VARS, table=None) -> Formula:
    """Any well-formed formula, turnstiles included, with depth at most ``depth``."""
    preds = [(e.name, e.arity or 2) for e in table.predicates.values()] if table else []
    return _formula(rng, depth, variables, preds, under_turnstile=False)


def _formula(rng, depth, variables, preds, under_turnstile):
    if depth <= 1 or rng.random() < 0.2:
        if preds and rng.random() < 0.2:
            name, arity = rng.choice(preds)
            return Pred(name, tuple(random_term(rng, 1, variables) for _ in range(arity)))
        return Eq(random_term(rng, 2, variables), random_term(rng, 2, variables))
    kind = rng.randrange(10 if under_turnstile else 11)
    sub = lambda: _formula(rng, depth - 1, variables, preds, False)  # noqa: E731
    if kind == 0:
        return Not(sub())
    if kind in (1, 2, 3):
        return (Implies, And, Or)[kind - 1](sub(), sub())
    if kind in (4, 5, 6, 7, 8, 9):
        q = (ForAll, ForAll, Exists, Exists, ExistsUnique, ForAll)[kind - 4]
        return q(rng.choice(variables), sub())
    return Turnstile(_formula(rng, depth - 1, variables, preds, True))


def random_closed_qf(rng: random.Random, depth: int = 2, max_value: int = 3) -> Formula:
    """A closed quantifier-free formula over small numerals."""
    def term(d):
        if d <= 0 or rng.random() < 0.4:
            return numeral(rng.randrange(max_value + 1))
        return (Add if rng.random() < 0.6 else Mul)(term(d - 1), term(d - 1))

    def form(d):
        if d <= 0 or rng.random() < 0.4:
            return Eq(term(1), term(1))
        k = rng.randrange(4)
        if k == 0:
            return Not(form(d - 1))
        return (Implies, And, Or)[k - 1](form(d - 1), form(d - 1))
    return form(depth)


def _num(var="x") -> str:
    return print_formula(num_formula(var, pp=True))


_HAND = {
    "pp3-axiom": ("PP", """
        0 | (Ax)|=PP((x+0)=x) | AX PP3
    """),
    "pp-instantiation": ("PP", """
        0 | (Ax)|=PP((x+0)=x) | AX PP3
        1 | |=PP(((0+1)+0)=(0+1)) | RULE INST 0
    """),
    "pp-mp-under-prefix": ("PP", """
        0 | (Ax)|=PP((x+0)=x) | AX PP3
        1 | (Ax)|=PP(((x+0)=x)=>(((x+0)=x)|(x=0))) | LOG TAUT
        2 | (Ax)|=PP(((x+0)=x)|(x=0)) | RULE PPR1 0 1
    """),
    "pp-induction": ("PP", """
        0 | |=PP(0=0) | LOG EQREFL
        1 | (Ax)|=PP((x+1)=(x+1)) | LOG EQREFL
        2 | (Ax)|=PP(((x+1)=(x+1))=>((x=x)=>((x+1)=(x+1)))) | LOG TAUT
        3 | (Ax)|=PP((x=x)=>((x+1)=(x+1))) | RULE PPR1 1 2
        4 | (Ax)|=PP(x=x) | RULE PPR2 0 3
    """),
    "pp-plus-numeral-pattern": ("PP+", f"""
        0 | (Ax)(|=PP{_num()}=>|=PP{_num()}) | LOG TAUT
        1 | (Ax)|=PP{_num()} | RULE PPR3 0
    """),
    "pa-generalisation": ("PA", """
        0 | ((x+0)=x) | AX GP3 [x]
        1 | (Ax)((x+0)=x) | RULE GPR3 0
    """),
    "pa-modus-ponens": ("PA", """
        0 | ((0+0)=0) | AX GP3 [0]
        1 | (((0+0)=0)=>(~(~((0+0)=0)))) | LOG TAUT
        2 | (~(~((0+0)=0))) | RULE GPR1 0 1
    """),
    "pa-induction": ("PA", """
        0 | ((0+0)=0) | AX GP3 [0]
        1 | (((x+1)+0)=(x+1)) | AX GP3 [(x+1)]
        2 | ((((x+1)+0)=(x+1))=>(((x+0)=x)=>(((x+1)+0)=(x+1)))) | LOG TAUT
        3 | (((x+0)=x)=>(((x+1)+0)=(x+1))) | RULE GPR1 1 2
        4 | (Ax)(((x+0)=x)=>(((x+1)+0)=(x+1))) | RULE GPR3 3
        5 | (Ax)((x+0)=x) | RULE GPR2 0 4
    """),
}


def hand_proofs(table=None) -> dict[str, Proof]:
    """Small proofs exercising each rule; every one is accepted by the kernel."""
    out = {}
    for name, (system, text) in _HAND.items():
        proof = parse_proof(text, system, table)
        verdict = check(proof)
        assert verdict.accepted, (name, verdict.failures)
        out[name] = proof
    return out


def proof_corpus(seed: int, count: int = 20, table=None) -> list[Proof]:
    """Hand proofs plus generated proofs of random true closed goals."""
    rng = random.Random(seed)
    proofs = list(hand_proofs(table).values())
    systems = ["PP", "PP+", "PA"]
    attempts = 0
    while len(proofs) < count:
        attempts += 1
        if attempts > 50 * count:
            raise RuntimeError("could not generate enough proofs")
        goal = random_closed_qf(rng, depth=rng.randrange(3), max_value=3)
        if not eval_closed(goal).is_true:
            goal = Not(goal)
        system = get_system(systems[len(proofs) % 3])
        target = Turnstile(goal) if system.is_pp else goal
        try:
            proof = witness_proof(target, system)
        except NotDerivableByThisGenerator:
            continue
        if len(proof.lines) > 150:
            continue
        proofs.append(proof)
    return proofs


def mutate_formulas(formulas: list[Formula], rng: random.Random, table=None) -> tuple[list[Formula], str]:
    """One single-point corruption of a formula sequence, with a label.

    The mutation flips one ``0``/``1`` token of one line, drops a line, or
    moves a line to a different position.
    """
    formulas = list(formulas)
    kinds = ["flip", "flip"]
    if len(formulas) > 1:
        kinds += ["drop", "move"]
    kind = rng.choice(kinds)
    if kind == "flip":
        for _ in range(100):
            i = rng.randrange(len(formulas))
            toks = formula_tokens(formulas[i])
            spots = [k for k, t in enumerate(toks) if t in ("0", "1")]
            if spots:
                break
        else:
            kind = "drop"
    if kind == "flip":
        k = rng.choice(spots)
        toks[k] = "1" if toks[k] == "0" else "0"
        formulas[i] = parse(" ".join(toks), table)
        return formulas, f"flip token {k} of line {i}"
    if kind == "drop":
        i = rng.randrange(len(formulas) - 1)  # keep the conclusion
        del formulas[i]
        return formulas, f"drop line {i}"
    i = rng.randrange(len(formulas))
    j = rng.choice([k for k in range(len(formulas)) if k != i])
    formulas.insert(j, formulas.pop(i))
    return formulas, f"move line {i} to {j}"
