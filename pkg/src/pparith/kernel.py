"""Proof objects and the proof checker for PP, PP+ and PA.

A proof is a list of lines, each a formula with a justification: an axiom
instance, a logical-base axiom, or a rule applied to earlier lines.  The
checker is purely syntactic.

Logical base (shared by all systems, and admissible under any universal
prefix ``(Ax1)...(Axn)``):

``TAUT``
    the propositional skeleton is a truth-table tautology; atoms are the
    maximal non-propositional subformulas and the turnstile is transparent
``UI`` / ``EG``
    ``(Ax)F => F[x:=t]`` and ``F[x:=t] => (Ex)F``
``EQREFL``
    ``t=t``
``EQSUB``
    ``(s=t) => (A => B)`` where B is A with some occurrences of s replaced
    by t (never below a binder of a variable of s or t)

Formulas are compared after removing turnstiles and unfolding ``E!``, so a
PP judgment ``|=PP F`` and the bare ``F`` play the same logical role; every
PP line must still be a PP well-formed formula, and PA lines may not contain
the turnstile at all.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .syntax import (
    Add, And, Eq, Exists, ExistsUnique, ForAll, Formula, Implies, Mul, Not, Numeral,
    One, Or, Pred, Term, Turnstile, Var, Zero, fresh_name, free_vars, is_pp_wff,
    numeral, numeral_value, parse, parse_term, print_formula, print_term,
    strip_turnstiles, substitute, substitute_many, term_vars, QUANTIFIERS,
)

__all__ = [
    "SystemConfig", "SYSTEMS", "get_system", "AxiomInstance", "LogicalAxiom", "Rule",
    "ProofLine", "Proof", "Verdict", "LineDiagnostic", "KernelError",
    "axiom_instance", "check", "check_formulas", "justify", "num_formula",
    "normalize", "parse_proof", "format_proof",
]


class KernelError(ValueError):
    pass


# ---------------------------------------------------------------- systems

_X, _Y = Var("x"), Var("y")
_S = lambda t: Add(t, One())  # noqa: E731

# open bodies in x, y shared by PP1-6 and GP1-6
SCHEMA_BODIES: dict[int, tuple[tuple[str, ...], Formula]] = {
    1: (("x",), Not(Eq(Zero(), _S(_X)))),
    2: (("x", "y"), Implies(Not(Eq(_X, _Y)), Not(Eq(_S(_X), _S(_Y))))),
    3: (("x",), Eq(Add(_X, Zero()), _X)),
    4: (("x", "y"), Eq(Add(_X, _S(_Y)), _S(Add(_X, _Y)))),
    5: (("x",), Eq(Mul(_X, Zero()), Zero())),
    6: (("x", "y"), Eq(Mul(_X, _S(_Y)), Add(Mul(_X, _Y), _X))),
}

LOGICAL_KINDS = ("TAUT", "UI", "EG", "EQREFL", "EQSUB")


@dataclass(frozen=True)
class SystemConfig:
    name: str
    axiom_schemas: tuple[str, ...]
    rules: tuple[str, ...]
    logical_base: tuple[str, ...] = LOGICAL_KINDS

    @property
    def is_pp(self) -> bool:
        return self.name in ("PP", "PP+")

    def enables(self, rule: str) -> bool:
        return rule in self.rules


_PP_AXIOMS = tuple(f"PP{i}" for i in range(1, 7))
_GP_AXIOMS = tuple(f"GP{i}" for i in range(1, 7))

SYSTEMS = {
    "PP": SystemConfig("PP", _PP_AXIOMS, ("PPR1", "PPR2", "INST")),
    "PP+": SystemConfig("PP+", _PP_AXIOMS, ("PPR1", "PPR2", "PPR3", "INST")),
    "PA": SystemConfig("PA", _GP_AXIOMS, ("GPR1", "GPR2", "GPR3")),
}

RULE_ARITY = {"PPR1": 2, "PPR2": 2, "PPR3": 1, "INST": 1, "GPR1": 2, "GPR2": 2, "GPR3": 1}


def get_system(name: str | SystemConfig) -> SystemConfig:
    if isinstance(name, SystemConfig):
        return name
    try:
        return SYSTEMS[name.upper()]
    except KeyError:
        raise KernelError(f"unknown system {name!r}; expected one of {sorted(SYSTEMS)}") from None


def _pp_axiom(i: int) -> Formula:
    names, body = SCHEMA_BODIES[i]
    f: Formula = Turnstile(body)
    for v in reversed(names):
        f = ForAll(v, f)
    return f


PP_AXIOMS = {f"PP{i}": _pp_axiom(i) for i in range(1, 7)}


def axiom_instance(system, schema: str, terms: Sequence[Term] = ()) -> Formula:
    """PP axioms are closed and take no terms; GP schemas take one term per variable."""
    system = get_system(system)
    if schema not in system.axiom_schemas:
        raise KernelError(f"schema {schema} is not an axiom of {system.name}")
    i = int(schema[2:])
    names, body = SCHEMA_BODIES[i]
    terms = tuple(terms)
    if schema.startswith("PP"):
        if terms:
            raise KernelError(f"{schema} is a closed axiom and takes no terms")
        return PP_AXIOMS[schema]
    if len(terms) != len(names):
        raise KernelError(f"{schema} takes {len(names)} term(s), got {len(terms)}")
    return substitute_many(body, dict(zip(names, terms)))


def num_formula(var: str = "x", pp: bool = True) -> Formula:
    """``x is a numeral``: ``(x=0) | (E!y)(E!z)((x=(y+1)) & (z=(x+1)))``."""
    y = "y" if var != "y" else fresh_name("y", {var})
    z = "z" if var != "z" else fresh_name("z", {var, y})
    x = Var(var)
    core: Formula = And(Eq(x, _S(Var(y))), Eq(Var(z), _S(x)))
    if pp:
        inner: Formula = ExistsUnique(y, Turnstile(ExistsUnique(z, Turnstile(core))))
    else:
        inner = ExistsUnique(y, ExistsUnique(z, core))
    return Or(Eq(x, Zero()), inner)


# ---------------------------------------------------------------- proof objects

@dataclass(frozen=True)
class AxiomInstance:
    schema: str
    terms: tuple[Term, ...] = ()

    def __str__(self):
        if not self.terms:
            return f"AX {self.schema}"
        return f"AX {self.schema} [{', '.join(print_term(t) for t in self.terms)}]"


@dataclass(frozen=True)
class LogicalAxiom:
    kind: str

    def __str__(self):
        return f"LOG {self.kind}"


@dataclass(frozen=True)
class Rule:
    rule: str
    premises: tuple[int, ...]

    def __str__(self):
        return " ".join(["RULE", self.rule, *map(str, self.premises)])


Justification = AxiomInstance | LogicalAxiom | Rule


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass
class Proof:
    lines: list[ProofLine]
    system: SystemConfig

    def __post_init__(self):
        self.system = get_system(self.system)
        if not self.lines:
            raise KernelError("a proof has at least one line")

    @property
    def conclusion(self) -> Formula:
        return self.lines[-1].formula

    @property
    def formulas(self) -> list[Formula]:
        return [ln.formula for ln in self.lines]


@dataclass(frozen=True)
class LineDiagnostic:
    index: int
    status: str  # "OK" or "FAIL"
    reason: str = ""


@dataclass
class Verdict:
    accepted: bool
    diagnostics: list[LineDiagnostic] = field(default_factory=list)

    @property
    def failures(self) -> list[LineDiagnostic]:
        return [d for d in self.diagnostics if d.status != "OK"]

    @property
    def first_failure(self) -> int | None:
        bad = self.failures
        return bad[0].index if bad else None


# ---------------------------------------------------------------- normal forms

def _unfold_unique(f: Formula) -> Formula:
    if isinstance(f, (Eq, Pred)):
        return f
    if isinstance(f, Not):
        return Not(_unfold_unique(f.f))
    if isinstance(f, Turnstile):
        return Turnstile(_unfold_unique(f.body))
    if isinstance(f, ExistsUnique):
        body = _unfold_unique(f.body)
        z = fresh_name("z", free_vars(body) | {f.var} | _bound_vars(body))
        other = substitute(body, f.var, Var(z))
        return Exists(f.var, And(body, ForAll(z, Implies(other, Eq(Var(z), Var(f.var))))))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, _unfold_unique(f.body))
    return type(f)(_unfold_unique(f.a), _unfold_unique(f.b))


def _bound_vars(f: Formula) -> set[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, QUANTIFIERS):
            out.add(g.var)
            stack.append(g.body)
        elif isinstance(g, (Not,)):
            stack.append(g.f)
        elif isinstance(g, Turnstile):
            stack.append(g.body)
        elif isinstance(g, (Implies, And, Or)):
            stack.extend((g.a, g.b))
    return out


def normalize(f: Formula) -> Formula:
    """The form rules compare: turnstiles removed, ``E!`` unfolded."""
    return _unfold_unique(strip_turnstiles(f))


# ---------------------------------------------------------------- matching

def _match_term(p: Term, t: Term, metas: frozenset, env: dict) -> bool:
    if isinstance(p, Var) and p.name in metas:
        seen = env.get(p.name)
        if seen is None:
            env[p.name] = t
            return True
        return seen == t
    if isinstance(p, Numeral) or not isinstance(p, (Add, Mul)):
        return p == t
    if isinstance(p, Mul):
        return isinstance(t, Mul) and _match_term(p.left, t.left, metas, env) \
            and _match_term(p.right, t.right, metas, env)
    return isinstance(t, Add) and _match_term(p.left, t.left, metas, env) \
        and _match_term(p.right, t.right, metas, env)


def _match(p: Formula, f: Formula, metas: frozenset, env: dict) -> bool:
    if type(p) is not type(f):
        return False
    if isinstance(p, Eq):
        return _match_term(p.left, f.left, metas, env) and _match_term(p.right, f.right, metas, env)
    if isinstance(p, Pred):
        return p.name == f.name and len(p.args) == len(f.args) and all(
            _match_term(a, b, metas, env) for a, b in zip(p.args, f.args))
    if isinstance(p, Not):
        return _match(p.f, f.f, metas, env)
    if isinstance(p, Turnstile):
        return _match(p.body, f.body, metas, env)
    if isinstance(p, QUANTIFIERS):
        return p.var == f.var and _match(p.body, f.body, metas - {p.var}, env)
    return _match(p.a, f.a, metas, env) and _match(p.b, f.b, metas, env)


def match_schema(pattern: Formula, f: Formula, metas: Iterable[str]) -> dict[str, Term] | None:
    """Terms for ``metas`` making ``pattern`` equal to ``f``, or None."""
    metas = tuple(metas)
    env: dict[str, Term] = {}
    if not _match(pattern, f, frozenset(metas), env):
        return None
    full = {v: env.get(v, Var(v)) for v in metas}
    return full if substitute_many(pattern, full) == f else None


def _instance_term(body: Formula, var: str, f: Formula) -> Term | None:
    env = match_schema(body, f, (var,))
    return None if env is None else env[var]


# ---------------------------------------------------------------- logical base

def _skeleton_atoms(f: Formula, atoms: dict) -> None:
    if isinstance(f, Not):
        _skeleton_atoms(f.f, atoms)
    elif isinstance(f, (Implies, And, Or)):
        _skeleton_atoms(f.a, atoms)
        _skeleton_atoms(f.b, atoms)
    else:
        atoms.setdefault(f, len(atoms))


def _truth(f: Formula, atoms: dict, bits: int) -> bool:
    if isinstance(f, Not):
        return not _truth(f.f, atoms, bits)
    if isinstance(f, Implies):
        return (not _truth(f.a, atoms, bits)) or _truth(f.b, atoms, bits)
    if isinstance(f, And):
        return _truth(f.a, atoms, bits) and _truth(f.b, atoms, bits)
    if isinstance(f, Or):
        return _truth(f.a, atoms, bits) or _truth(f.b, atoms, bits)
    return bool(bits >> atoms[f] & 1)


MAX_TAUT_ATOMS = 14


def is_tautology(f: Formula) -> bool:
    """Truth-table test on the propositional skeleton of ``normalize(f)``."""
    f = normalize(f)
    atoms: dict = {}
    _skeleton_atoms(f, atoms)
    if len(atoms) > MAX_TAUT_ATOMS:
        return False
    return all(_truth(f, atoms, bits) for bits in range(1 << len(atoms)))


def _replaced(a, b, s: Term, t: Term, svars: set, bound: frozenset) -> bool:
    """b is a with some occurrences of s replaced by t, outside binders of svars."""
    if a == b:
        return True
    if isinstance(a, Term):
        if a == s and b == t and not (svars & bound):
            return True
        if isinstance(a, Numeral) or not isinstance(a, (Add, Mul)):
            return False
        if isinstance(a, Mul) != isinstance(b, Mul) or not isinstance(b, (Add, Mul)):
            return False
        return _replaced(a.left, b.left, s, t, svars, bound) and \
            _replaced(a.right, b.right, s, t, svars, bound)
    if type(a) is not type(b):
        return False
    if isinstance(a, Eq):
        return _replaced(a.left, b.left, s, t, svars, bound) and \
            _replaced(a.right, b.right, s, t, svars, bound)
    if isinstance(a, Pred):
        return a.name == b.name and len(a.args) == len(b.args) and all(
            _replaced(x, y, s, t, svars, bound) for x, y in zip(a.args, b.args))
    if isinstance(a, Not):
        return _replaced(a.f, b.f, s, t, svars, bound)
    if isinstance(a, QUANTIFIERS):
        return a.var == b.var and _replaced(a.body, b.body, s, t, svars, bound | {a.var})
    return _replaced(a.a, b.a, s, t, svars, bound) and _replaced(a.b, b.b, s, t, svars, bound)


def _logical_ok(kind: str, f: Formula) -> bool:
    """``f`` (already normalized, prefix removed) is a ``kind`` axiom."""
    if kind == "TAUT":
        return is_tautology(f)
    if kind == "EQREFL":
        return isinstance(f, Eq) and f.left == f.right
    if not isinstance(f, Implies):
        return False
    if kind == "UI":
        return isinstance(f.a, ForAll) and _instance_term(f.a.body, f.a.var, f.b) is not None
    if kind == "EG":
        return isinstance(f.b, Exists) and _instance_term(f.b.body, f.b.var, f.a) is not None
    if kind == "EQSUB":
        if not (isinstance(f.a, Eq) and isinstance(f.b, Implies)):
            return False
        s, t = f.a.left, f.a.right
        return _replaced(f.b.a, f.b.b, s, t, term_vars(s) | term_vars(t), frozenset())
    return False


def _logical_check(kind: str, f: Formula) -> bool:
    """Logical axiom under any universal prefix."""
    g = normalize(f)
    while True:
        if _logical_ok(kind, g):
            return True
        if not isinstance(g, ForAll):
            return False
        g = g.body


# ---------------------------------------------------------------- rules

def _peel(f: Formula, k: int):
    vars_ = []
    for _ in range(k):
        if not isinstance(f, ForAll):
            return None
        vars_.append(f.var)
        f = f.body
    return tuple(vars_), f


def _mp_ok(concl: Formula, minor: Formula, major: Formula, deep: bool = True) -> bool:
    """Under a common universal prefix: minor is F, major is F=>G, concl is G."""
    k = 0
    while k == 0 or deep:
        pc, pm, pj = _peel(concl, k), _peel(minor, k), _peel(major, k)
        if pc is None or pm is None or pj is None:
            return False
        if pc[0] == pm[0] == pj[0]:
            body = pj[1]
            if isinstance(body, Implies) and body.a == pm[1] and body.b == pc[1]:
                return True
        else:
            return False
        k += 1
    return False


def _induction_premises(concl: Formula):
    if not isinstance(concl, ForAll):
        return None
    x, body = concl.var, concl.body
    base = substitute(body, x, Zero())
    step = ForAll(x, Implies(body, substitute(body, x, _S(Var(x)))))
    return base, step


def _rule_ok(system: SystemConfig, rule: str, concl: Formula,
             prem: list[Formula]) -> str | None:
    """None if the (normalized) conclusion follows; else a reason."""
    if rule in ("PPR1", "GPR1"):
        # GPR1 is plain modus ponens; PPR1 also runs under a universal prefix
        deep = rule == "PPR1"
        if _mp_ok(concl, prem[0], prem[1], deep) or _mp_ok(concl, prem[1], prem[0], deep):
            return None
        return "not an instance of modus ponens"
    if rule in ("PPR2", "GPR2"):
        need = _induction_premises(concl)
        if need is None:
            return "induction concludes a universal formula"
        if prem in ([need[0], need[1]], [need[1], need[0]]):
            return None
        return "premises are not F(0) and (Ax)(F(x)=>F(x+1))"
    if rule == "GPR3":
        if isinstance(concl, ForAll) and concl.body == prem[0]:
            return None
        return "generalisation concludes (Ax)F from F"
    if rule == "INST":
        p = prem[0]
        if not isinstance(p, ForAll):
            return "instantiation needs a universal premise"
        t = _instance_term(p.body, p.var, concl)
        if t is None:
            return "conclusion is not an instance of the premise"
        if numeral_value(t) is None:
            return "instantiation is only at numerals"
        return None
    if rule == "PPR3":
        if not isinstance(concl, ForAll):
            return "PPR3 concludes a universal formula"
        x = concl.var
        want = ForAll(x, Implies(normalize(num_formula(x, pp=True)), concl.body))
        if prem[0] == want:
            return None
        return "premise is not (Ax)(|=PP Num(x) => |=PP F(x))"
    return f"unknown rule {rule}"


# ---------------------------------------------------------------- checking

def _line_form_error(system: SystemConfig, f: Formula) -> str | None:
    if system.is_pp:
        if not is_pp_wff(f):
            return "not a PP well-formed formula"
    elif any(isinstance(g, Turnstile) for g in _subformulas(f)):
        return "the turnstile is not part of PA"
    return None


def _subformulas(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, Not):
            stack.append(g.f)
        elif isinstance(g, (Turnstile,) + QUANTIFIERS):
            stack.append(g.body)
        elif isinstance(g, (Implies, And, Or)):
            stack.extend((g.a, g.b))


def _check_line(system: SystemConfig, i: int, f: Formula, just, norms: list) -> str | None:
    err = _line_form_error(system, f)
    if err:
        return err
    if isinstance(just, AxiomInstance):
        if just.schema not in system.axiom_schemas:
            return f"{just.schema} is not an axiom of {system.name}"
        try:
            ax = axiom_instance(system, just.schema, just.terms)
        except KernelError as e:
            return str(e)
        return None if ax == f else f"formula is not the {just.schema} instance"
    if isinstance(just, LogicalAxiom):
        if just.kind not in system.logical_base:
            return f"unknown logical axiom kind {just.kind}"
        return None if _logical_check(just.kind, f) else f"not a {just.kind} axiom"
    if isinstance(just, Rule):
        if just.rule not in RULE_ARITY:
            return f"unknown rule {just.rule}"
        if not system.enables(just.rule):
            return f"rule not enabled: {just.rule} is not a rule of {system.name}"
        if len(just.premises) != RULE_ARITY[just.rule]:
            return f"{just.rule} takes {RULE_ARITY[just.rule]} premise(s)"
        for j in just.premises:
            if not 0 <= j < i:
                return f"premise index {j} does not precede line {i}"
        return _rule_ok(system, just.rule, norms[i], [norms[j] for j in just.premises])
    return "missing justification"


def check(proof: Proof) -> Verdict:
    system = proof.system
    norms = [normalize(ln.formula) for ln in proof.lines]
    diags = []
    for i, ln in enumerate(proof.lines):
        reason = _check_line(system, i, ln.formula, ln.justification, norms)
        diags.append(LineDiagnostic(i, "OK" if reason is None else "FAIL", reason or ""))
    return Verdict(all(d.status == "OK" for d in diags), diags)


# ---------------------------------------------------------------- reconstruction

def _find_axiom(system: SystemConfig, f: Formula) -> AxiomInstance | None:
    for schema in system.axiom_schemas:
        i = int(schema[2:])
        if schema.startswith("PP"):
            if PP_AXIOMS[schema] == f:
                return AxiomInstance(schema)
            continue
        names, body = SCHEMA_BODIES[i]
        env = match_schema(body, f, names)
        if env is not None:
            return AxiomInstance(schema, tuple(env[v] for v in names))
    return None


def _candidates(system: SystemConfig, i: int, concl: Formula, norms: list,
                index: dict) -> Iterable[Rule]:
    """Rule applications whose premises are found among lines before ``i``."""
    earlier = range(i)

    def at(f):
        j = index.get(f)
        return j if j is not None and j < i else None

    for rule in system.rules:
        if rule in ("PPR1", "GPR1"):
            for j in earlier:
                k = 0
                g = norms[j]
                prefix: list[str] = []
                while True:
                    if isinstance(g, Implies):
                        pc = _peel(concl, k)
                        if pc is not None and pc[0] == tuple(prefix) and pc[1] == g.b:
                            minor = g.a
                            for v in reversed(prefix):
                                minor = ForAll(v, minor)
                            m = at(minor)
                            if m is not None:
                                yield Rule(rule, (m, j))
                    if not isinstance(g, ForAll) or rule == "GPR1":
                        break
                    prefix.append(g.var)
                    g = g.body
                    k += 1
        elif rule in ("PPR2", "GPR2"):
            need = _induction_premises(concl)
            if need is not None:
                a, b = at(need[0]), at(need[1])
                if a is not None and b is not None:
                    yield Rule(rule, (a, b))
        elif rule == "GPR3":
            if isinstance(concl, ForAll):
                a = at(concl.body)
                if a is not None:
                    yield Rule(rule, (a,))
        elif rule == "PPR3":
            if isinstance(concl, ForAll):
                x = concl.var
                a = at(ForAll(x, Implies(normalize(num_formula(x)), concl.body)))
                if a is not None:
                    yield Rule(rule, (a,))
        elif rule == "INST":
            for j in earlier:
                if isinstance(norms[j], ForAll):
                    yield Rule(rule, (j,))


def justify(formulas: Sequence[Formula], system) -> list[Justification | None]:
    """Reconstruct a justification for each line from the formulas alone."""
    system = get_system(system)
    norms = [normalize(f) for f in formulas]
    index: dict[Formula, int] = {}
    out: list[Justification | None] = []
    for i, f in enumerate(formulas):
        found: Justification | None = None
        if _line_form_error(system, f) is None:
            found = _find_axiom(system, f)
            if found is None:
                for kind in system.logical_base:
                    if _logical_check(kind, f):
                        found = LogicalAxiom(kind)
                        break
            if found is None:
                for cand in _candidates(system, i, norms[i], norms, index):
                    if _check_line(system, i, f, cand, norms) is None:
                        found = cand
                        break
        out.append(found)
        index.setdefault(norms[i], i)
    return out


def check_formulas(formulas: Sequence[Formula], system) -> Verdict:
    """Check a bare formula sequence: every line must have some justification."""
    system = get_system(system)
    if not formulas:
        return Verdict(False, [LineDiagnostic(0, "FAIL", "empty proof")])
    diags = []
    for i, j in enumerate(justify(formulas, system)):
        if j is None:
            diags.append(LineDiagnostic(i, "FAIL", "no justification found"))
        else:
            diags.append(LineDiagnostic(i, "OK", str(j)))
    return Verdict(all(d.status == "OK" for d in diags), diags)


# ---------------------------------------------------------------- text format

def format_proof(proof: Proof) -> str:
    out = [f"# system: {proof.system.name}"]
    for i, ln in enumerate(proof.lines):
        out.append(f"{i} | {print_formula(ln.formula)} | {ln.justification}")
    return "\n".join(out) + "\n"


def _split_terms(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        depth += (ch == "(") - (ch == ")")
        cur.append(ch)
    if "".join(cur).strip():
        parts.append("".join(cur))
    return [p.strip() for p in parts]


def parse_justification(text: str) -> Justification:
    words = text.split(None, 2)
    if not words:
        raise KernelError("empty justification")
    head = words[0]
    if head == "AX" and len(words) >= 2:
        rest = words[2].strip() if len(words) > 2 else ""
        terms: tuple[Term, ...] = ()
        if rest:
            if not (rest.startswith("[") and rest.endswith("]")):
                raise KernelError(f"axiom terms must be bracketed: {rest!r}")
            terms = tuple(parse_term(t) for t in _split_terms(rest[1:-1]))
        return AxiomInstance(words[1], terms)
    if head == "LOG" and len(words) == 2:
        return LogicalAxiom(words[1])
    if head == "RULE" and len(words) >= 2:
        try:
            prem = tuple(int(w) for w in text.split()[2:])
        except ValueError:
            raise KernelError(f"premise indices must be integers: {text!r}") from None
        return Rule(words[1], prem)
    raise KernelError(f"cannot read justification {text!r}")


def parse_proof(text: str, system, table=None) -> Proof:
    """Read the ``<index> | <formula> | <justification>`` format.

    Blank lines and lines starting with ``#`` are ignored; indices are
    0-based and must be consecutive.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split("|")
        # the formula itself may contain '|' (disjunction, turnstile)
        if len(parts) < 3:
            raise KernelError(f"line {lineno}: expected '<index> | <formula> | <justification>'")
        idx_s, just_s, formula_s = parts[0], parts[-1], "|".join(parts[1:-1])
        try:
            idx = int(idx_s)
        except ValueError:
            raise KernelError(f"line {lineno}: bad index {idx_s.strip()!r}") from None
        if idx != len(lines):
            raise KernelError(f"line {lineno}: index {idx}, expected {len(lines)}")
        try:
            just = parse_justification(just_s.strip())
        except KernelError as e:
            raise KernelError(f"line {lineno}: {e}") from None
        lines.append(ProofLine(parse(formula_s.strip(), table), just))
    if not lines:
        raise KernelError("proof file has no lines")
    return Proof(lines, get_system(system))
