"""Proof generation: witness proofs for closed quantifier-free truths, and
bounded forward search.

:func:`witness_proof` proves a true propositional combination of closed-term
equalities.  Each term is rewritten to its numeral by unfolding the addition
and multiplication axioms (3-6) on numerals, disequalities between numerals
come from axioms 1 and 2, and a final tautology assembles the literals.  In
PP the axioms are instantiated at numerals with INST; in PA the schemas are
instantiated directly.

The bare constant ``1`` is outside the generator's fragment except as the
right operand of ``+``: ``(0+1)=1`` needs induction.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .kernel import (
    PP_AXIOMS, RULE_ARITY, SCHEMA_BODIES, AxiomInstance, KernelError, LogicalAxiom,
    Proof, ProofLine, Rule, SystemConfig, _induction_premises, _instance_term, _peel,
    axiom_instance, check, get_system, normalize, num_formula,
)
from .semantics import eval_closed
from .syntax import (
    Add, And, Eq, ForAll, Formula, Implies, Mul, Not, Numeral, One, Or, Pred, Term,
    Turnstile, Var, Zero, free_vars, numeral, numeral_value, print_formula,
    strip_turnstiles, substitute, substitute_many, term_vars,
)

__all__ = ["NotDerivableByThisGenerator", "witness_proof", "search", "SearchLimitExceeded",
           "MAX_SEARCH_DEPTH", "DEFAULT_NUMERAL_CAP"]


class NotDerivableByThisGenerator(KernelError):
    pass


class SearchLimitExceeded(KernelError):
    pass


# ---------------------------------------------------------------- proof builder

class _Builder:
    def __init__(self, system: SystemConfig):
        self.system = system
        self.lines: list[ProofLine] = []
        self.index: dict[Formula, int] = {}
        self.pp = system.is_pp

    def add(self, f: Formula, just) -> int:
        i = self.index.get(f)
        if i is not None:
            return i
        self.lines.append(ProofLine(f, just))
        self.index[f] = len(self.lines) - 1
        return len(self.lines) - 1

    def plain(self, i: int) -> Formula:
        return strip_turnstiles(self.lines[i].formula)

    def mp(self, minor: int, major: int) -> int:
        g = self.plain(major)
        assert isinstance(g, Implies) and g.a == self.plain(minor), "bad modus ponens"
        rule = "PPR1" if self.pp else "GPR1"
        raw = self.lines[major].formula
        while isinstance(raw, Turnstile):
            raw = raw.body
        return self.add(raw.b, Rule(rule, (minor, major)))

    def axiom(self, k: int, *values: int) -> int:
        """Axiom k instantiated at the given numerals."""
        names, body = SCHEMA_BODIES[k]
        terms = [numeral(v) for v in values]
        if not self.pp:
            schema = f"GP{k}"
            return self.add(axiom_instance(self.system, schema, terms), AxiomInstance(schema, tuple(terms)))
        i = self.add(PP_AXIOMS[f"PP{k}"], AxiomInstance(f"PP{k}"))
        f = PP_AXIOMS[f"PP{k}"]
        for t in terms:
            assert isinstance(f, ForAll)
            f = substitute(f.body, f.var, t)
            i = self.add(f, Rule("INST", (i,)))
        return i

    def refl(self, t: Term) -> int:
        return self.add(Eq(t, t), LogicalAxiom("EQREFL"))

    def rewrite(self, cur: int, eq: int, new: Formula) -> int:
        """From ``cur`` (formula A) and ``eq`` (s=t) derive ``new`` (A with s -> t)."""
        e = self.plain(eq)
        sub = self.add(Implies(e, Implies(self.plain(cur), new)), LogicalAxiom("EQSUB"))
        return self.mp(cur, self.mp(eq, sub))

    def sym(self, eq: int) -> int:
        e = self.plain(eq)
        return self.rewrite(self.refl(e.left), eq, Eq(e.right, e.left))

    def trans(self, ab: int, bc: int) -> int:
        a = self.plain(ab).left
        return self.rewrite(ab, bc, Eq(a, self.plain(bc).right))

    def taut(self, f: Formula) -> int:
        return self.add(f, LogicalAxiom("TAUT"))

    # -- evaluation of closed terms

    def value(self, t: Term) -> tuple[int, int | None]:
        """(v, line proving t = numeral(v)); line is None if t is that numeral."""
        v = numeral_value(t)
        if v is not None:
            return v, None
        if isinstance(t, Var):
            raise NotDerivableByThisGenerator(f"free variable {t.name}")
        if isinstance(t, One):
            raise NotDerivableByThisGenerator("bare '1' outside a successor is not in the fragment")
        left, right = t.left, t.right
        if isinstance(t, Add) and isinstance(right, One):
            a, la = self.value(left)
            if la is None:
                return a + 1, None
            # (left+1) = (a+1)
            line = self.rewrite(self.refl(t), la, Eq(t, Add(numeral(a), One())))
            return a + 1, line
        a, la = self.value(left)
        b, lb = self.value(right)
        line = None
        cur = t
        if la is not None:
            nxt = type(t)(numeral(a), right)
            line = self.rewrite(self.refl(t), la, Eq(t, nxt))
            cur = nxt
        if lb is not None:
            nxt = type(t)(numeral(a), numeral(b))
            line = self.rewrite(line if line is not None else self.refl(t), lb, Eq(t, nxt))
            cur = nxt
        if isinstance(t, Add):
            v, lc = self.sum(a, b)
        else:
            v, lc = self.product(a, b)
        if line is None:
            return v, lc
        return v, self.trans(line, lc)

    def sum(self, a: int, b: int) -> tuple[int, int]:
        """Line proving ``(a+b) = numeral(a+b)``."""
        if b == 0:
            return a, self.axiom(3, a)
        # (a+(m+1)) = ((a+m)+1), (a+m) = c, so ((a+m)+1) = (c+1)
        m = b - 1
        step = self.axiom(4, a, m)
        if m == 0:
            inner = self.axiom(3, a)
        else:
            _, inner = self.sum(a, m)
        lhs = Add(numeral(a), numeral(b))
        line = self.rewrite(step, inner, Eq(lhs, numeral(a + b)))
        return a + b, line

    def product(self, a: int, b: int) -> tuple[int, int]:
        if b == 0:
            return 0, self.axiom(5, a)
        m = b - 1
        step = self.axiom(6, a, m)  # (a*(m+1)) = ((a*m)+a)
        c, inner = self.product(a, m)  # (a*m) = c
        lhs = Mul(numeral(a), numeral(b))
        line = self.rewrite(step, inner, Eq(lhs, Add(numeral(c), numeral(a))))
        _, add_line = self.sum(c, a)
        return c + a, self.trans(line, add_line)

    # -- literals

    def equal(self, s: Term, t: Term) -> int:
        a, ls = self.value(s)
        b, lt = self.value(t)
        assert a == b
        n = numeral(a)
        if ls is None and lt is None:
            return self.refl(s)
        if lt is None:
            return ls
        back = self.sym(lt)  # n = t
        if ls is None:
            return back
        return self.trans(ls, back)

    def numerals_differ(self, a: int, b: int) -> int:
        """Line proving ``~(a = b)`` for numerals a != b."""
        if a > b:
            flipped = self.numerals_differ(b, a)
            na, nb = numeral(a), numeral(b)
            # (a=b) => ((a=a) => (b=a)), then contrapose
            p, r, q = Eq(na, nb), Eq(na, na), Eq(nb, na)
            sub = self.add(Implies(p, Implies(r, q)), LogicalAxiom("EQSUB"))
            contra = self.taut(Implies(Implies(p, Implies(r, q)), Implies(r, Implies(Not(q), Not(p)))))
            step = self.mp(self.refl(na), self.mp(sub, contra))
            return self.mp(flipped, step)
        d = b - a
        line = self.axiom(1, d - 1)  # ~(0 = d)
        for k in range(a):
            line = self.mp(line, self.axiom(2, k, k + d))
        return line

    def unequal(self, s: Term, t: Term) -> int:
        a, ls = self.value(s)
        b, lt = self.value(t)
        line = self.numerals_differ(a, b)
        na, nb = numeral(a), numeral(b)
        if ls is not None:
            line = self.rewrite(line, self.sym(ls), Not(Eq(s, nb)))
        if lt is not None:
            line = self.rewrite(line, self.sym(lt), Not(Eq(s, t)))
        return line


def _atoms(f: Formula, out: list) -> None:
    if isinstance(f, Not):
        _atoms(f.f, out)
    elif isinstance(f, (Implies, And, Or)):
        _atoms(f.a, out)
        _atoms(f.b, out)
    elif isinstance(f, Eq):
        if f not in out:
            out.append(f)
    else:
        raise NotDerivableByThisGenerator(f"not quantifier-free over '=': {print_formula(f)}")


def witness_proof(goal: Formula, system, self_check: bool = True) -> Proof:
    """A kernel-checked proof of a true closed quantifier-free goal.

    ``self_check=False`` skips the internal check, for callers that check
    the returned proof themselves.
    """
    system = get_system(system)
    plain = strip_turnstiles(goal)
    if free_vars(plain):
        raise NotDerivableByThisGenerator("goal is not closed")
    atoms: list[Eq] = []
    _atoms(plain, atoms)
    if not eval_closed(plain).is_true:
        raise NotDerivableByThisGenerator("goal is not true")
    if not system.is_pp and goal != plain:
        raise NotDerivableByThisGenerator("the turnstile is not part of PA")
    b = _Builder(system)
    literals = []
    for atom in atoms:
        if eval_closed(atom).is_true:
            literals.append(b.equal(atom.left, atom.right))
        else:
            literals.append(b.unequal(atom.left, atom.right))
    if len(atoms) == 1 and b.plain(literals[0]) == plain:
        last = literals[0]
    else:
        f = plain
        for i in reversed(literals):
            f = Implies(b.plain(i), f)
        last = b.taut(f)
        for i in literals:
            last = b.mp(i, last)
    if b.lines[last].formula != goal:
        last = b.mp(last, b.taut(Implies(b.lines[last].formula, goal)))
    # premises precede their conclusion, so nothing after ``last`` is needed
    lines = b.lines[:last + 1]
    proof = Proof(lines, system)
    if self_check:
        verdict = check(proof)
        if not verdict.accepted:
            raise AssertionError(f"generated proof rejected: {verdict.failures[:3]}")
    return proof


# ---------------------------------------------------------------- search

MAX_SEARCH_DEPTH = 4
DEFAULT_NUMERAL_CAP = 3
DEFAULT_FORMULA_CAP = 20_000


def _sort_key(f: Formula):
    s = print_formula(f)
    return (len(s), s)


def _axioms_for_search(system: SystemConfig, cap: int) -> list[Formula]:
    if system.is_pp:
        return [PP_AXIOMS[s] for s in system.axiom_schemas]
    out = []
    pool = [Var("x"), Var("y")] + [numeral(n) for n in range(cap + 1)]
    for s in system.axiom_schemas:
        names, _ = SCHEMA_BODIES[int(s[2:])]
        for terms in _product(pool, len(names)):
            out.append(axiom_instance(system, s, terms))
    return out


def _product(pool, k):
    if k == 0:
        yield ()
        return
    for t in pool:
        for rest in _product(pool, k - 1):
            yield (t,) + rest


def _consequences(system: SystemConfig, known: list[Formula], known_set: set,
                  cap: int) -> Iterable[Formula]:
    norms = {normalize(f): f for f in known}
    by_norm = set(norms)
    for f in known:
        n = normalize(f)
        # single-premise rules
        if system.enables("INST") and isinstance(f, ForAll):
            for v in range(cap + 1):
                yield substitute(f.body, f.var, numeral(v))
        if system.enables("GPR3"):
            for x in sorted(free_vars(f)):
                yield ForAll(x, f)
        if system.enables("PPR3") and isinstance(n, ForAll) and isinstance(n.body, Implies) \
                and n.body.a == normalize(num_formula(n.var)) and isinstance(f, ForAll) \
                and isinstance(f.body, Implies):
            g = f.body.b
            yield ForAll(f.var, g if isinstance(g, Turnstile) else Turnstile(g))
        # modus ponens: f is the major premise F=>G under a prefix
        mp_rule = "PPR1" if system.is_pp else "GPR1"
        if system.enables(mp_rule):
            prefix: list[str] = []
            g, raw = n, f
            while True:
                if isinstance(g, Implies):
                    minor = g.a
                    for v in reversed(prefix):
                        minor = ForAll(v, minor)
                    if minor in by_norm:
                        yield _rewrap(raw, prefix, g.b, system)
                if not isinstance(g, ForAll) or not system.is_pp:
                    break
                prefix.append(g.var)
                g = g.body
                raw = _peel_raw(raw)
                if raw is None:
                    break
        # induction: f is the conclusion-to-be's step premise
        ind_rule = "PPR2" if system.is_pp else "GPR2"
        if system.enables(ind_rule) and isinstance(n, ForAll) and isinstance(n.body, Implies):
            x, body = n.var, n.body.a
            concl = ForAll(x, body)
            need = _induction_premises(concl)
            if need is not None and need[1] == n and need[0] in by_norm:
                yield ForAll(x, Turnstile(body)) if system.is_pp else concl


def _peel_raw(f: Formula):
    while isinstance(f, Turnstile):
        f = f.body
    return f.body if isinstance(f, ForAll) else None


def _rewrap(raw: Formula, prefix: list[str], g: Formula, system: SystemConfig) -> Formula:
    if not system.is_pp:
        return g
    body = g if isinstance(g, Turnstile) or not prefix else Turnstile(g)
    for v in reversed(prefix):
        body = ForAll(v, body)
    return body


def search(system, seeds: Sequence[Formula] = (), depth: int = 1,
           numeral_cap: int = DEFAULT_NUMERAL_CAP,
           formula_cap: int = DEFAULT_FORMULA_CAP) -> list[Formula]:
    """Bounded forward closure of axioms and seeds under the system's rules.

    Level 0 is the axiom instances (numerals up to ``numeral_cap``) plus the
    seeds; each further level adds every one-step consequence of the previous
    level.  Only well-formed lines for the system are kept.  The result is
    sorted by printed length, then text.
    """
    from .kernel import _line_form_error

    system = get_system(system)
    if not 0 <= depth <= MAX_SEARCH_DEPTH:
        raise SearchLimitExceeded(f"depth {depth} outside 0..{MAX_SEARCH_DEPTH}")
    known: list[Formula] = []
    seen: set[Formula] = set()

    def admit(f: Formula) -> None:
        if f not in seen and _line_form_error(system, f) is None:
            if len(known) >= formula_cap:
                raise SearchLimitExceeded(f"more than {formula_cap} formulas")
            seen.add(f)
            known.append(f)

    for f in _axioms_for_search(system, numeral_cap):
        admit(f)
    for f in seeds:
        admit(f)
    for _ in range(depth):
        snapshot = sorted(known, key=_sort_key)
        new = sorted(set(_consequences(system, snapshot, seen, numeral_cap)) - seen, key=_sort_key)
        if not new:
            break
        for f in new:
            admit(f)
    return sorted(known, key=_sort_key)
