"""Terms and formulas over the arithmetic alphabet, with parsing and printing.

Numerals are kept compact: ``Numeral(n)`` behaves structurally like
``Add(numeral(n - 1), One())`` but stores only ``n``, so numerals of very
large numbers (Gödel numbers, trace witnesses) cost O(1) memory.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

__all__ = [
    "Term", "Var", "Zero", "One", "Add", "Mul", "Numeral",
    "Formula", "Eq", "Not", "Implies", "And", "Or", "ForAll", "Exists",
    "ExistsUnique", "Turnstile", "Pred",
    "ParseError", "parse", "parse_term", "parse_tokens", "tokenize",
    "print_formula", "print_term", "formula_tokens", "numeral", "numeral_value",
    "substitute", "substitute_many", "free_vars", "term_vars", "is_proposition",
    "is_pp_wff", "strip_turnstiles", "fresh_name", "QUANTIFIERS", "MAX_PRINTED_NUMERAL",
]

# Numerals larger than this are refused by the canonical printer.
MAX_PRINTED_NUMERAL = 200_000


class Term:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class One(Term):
    pass


class Add(Term):
    """``(left+right)``; ``Add(numeral, One())`` collapses to a Numeral."""

    __slots__ = ("left", "right")

    def __new__(cls, left: Term, right: Term):
        if isinstance(right, One):
            if isinstance(left, Zero):
                return Numeral(1)
            if isinstance(left, Numeral):
                return Numeral(left.value + 1)
        self = object.__new__(cls)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        return self

    def __setattr__(self, key, value):
        raise AttributeError("terms are immutable")

    def __eq__(self, other):
        return type(other) is Add and self.left == other.left and self.right == other.right

    def __hash__(self):
        return hash(("Add", self.left, self.right))

    def __repr__(self):
        return f"Add({self.left!r}, {self.right!r})"

    def __reduce__(self):
        return (Add, (self.left, self.right))


class Numeral(Add):
    """The numeral ``((0+1)+...)+1`` with ``value`` successor steps (value >= 1)."""

    __slots__ = ("value",)

    def __new__(cls, value: int):
        if value < 1:
            raise ValueError("Numeral value must be >= 1; use Zero() for 0")
        self = object.__new__(cls)
        object.__setattr__(self, "value", int(value))
        return self

    @property
    def left(self) -> Term:
        return numeral(self.value - 1)

    @property
    def right(self) -> Term:
        return One()

    def __eq__(self, other):
        return type(other) is Numeral and other.value == self.value

    def __hash__(self):
        return hash(("Numeral", self.value))

    def __repr__(self):
        return f"Numeral({self.value})"

    def __reduce__(self):
        return (Numeral, (self.value,))


@dataclass(frozen=True)
class Mul(Term):
    left: Term
    right: Term


def numeral(n: int) -> Term:
    """Canonical numeral for ``n``: ``0``, ``(0+1)``, ``((0+1)+1)``, ..."""
    if n < 0:
        raise ValueError("numerals denote natural numbers")
    return Zero() if n == 0 else Numeral(n)


def numeral_value(t: Term) -> int | None:
    """Value of ``t`` if it is a numeral, else None."""
    if isinstance(t, Zero):
        return 0
    if isinstance(t, Numeral):
        return t.value
    return None


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Not(Formula):
    f: Formula


@dataclass(frozen=True)
class Implies(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class And(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class Or(Formula):
    a: Formula
    b: Formula


@dataclass(frozen=True)
class ForAll(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class ExistsUnique(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Turnstile(Formula):
    body: Formula


@dataclass(frozen=True)
class Pred(Formula):
    name: str
    args: tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


QUANTIFIERS = (ForAll, Exists, ExistsUnique)
_QUANT_TOKEN = {ForAll: "A", Exists: "E", ExistsUnique: "E!"}
_BINARY_TOKEN = {Implies: "=>", And: "&", Or: "|"}


# ---------------------------------------------------------------- printing

def _term_tokens(t: Term, out: list[str]) -> None:
    if isinstance(t, Var):
        out.append(t.name)
    elif isinstance(t, Zero):
        out.append("0")
    elif isinstance(t, One):
        out.append("1")
    elif isinstance(t, Numeral):
        if t.value > MAX_PRINTED_NUMERAL:
            raise ValueError(f"numeral of {t.value.bit_length()}-bit value is too large to print")
        out.extend(["("] * t.value)
        out.append("0")
        out.extend(["+", "1", ")"] * t.value)
    elif isinstance(t, (Add, Mul)):
        out.append("(")
        _term_tokens(t.left, out)
        out.append("+" if isinstance(t, Add) else "*")
        _term_tokens(t.right, out)
        out.append(")")
    else:
        raise TypeError(f"not a term: {t!r}")


def _formula_tokens(f: Formula, out: list[str]) -> None:
    while True:
        if isinstance(f, QUANTIFIERS):
            out.extend(["(", _QUANT_TOKEN[type(f)], f.var, ")"])
            f = f.body
        elif isinstance(f, Turnstile):
            out.append("|=PP")
            f = f.body
        else:
            break
    if isinstance(f, Eq):
        out.append("(")
        _term_tokens(f.left, out)
        out.append("=")
        _term_tokens(f.right, out)
        out.append(")")
    elif isinstance(f, Not):
        out.extend(["(", "~"])
        _formula_tokens(f.f, out)
        out.append(")")
    elif type(f) in _BINARY_TOKEN:
        out.append("(")
        _formula_tokens(f.a, out)
        out.append(_BINARY_TOKEN[type(f)])
        _formula_tokens(f.b, out)
        out.append(")")
    elif isinstance(f, Pred):
        out.extend([f.name, "("])
        for i, a in enumerate(f.args):
            if i:
                out.append(",")
            _term_tokens(a, out)
        out.append(")")
    else:
        raise TypeError(f"not a formula: {f!r}")


def formula_tokens(f: Formula) -> list[str]:
    """Token stream of the canonical printed form."""
    out: list[str] = []
    _formula_tokens(f, out)
    return out


def _term_token_count(t: Term) -> int:
    if isinstance(t, Numeral):
        return 1 + 4 * t.value
    if isinstance(t, (Add, Mul)):
        return 3 + _term_token_count(t.left) + _term_token_count(t.right)
    return 1


def formula_token_count(f: Formula) -> int:
    """``len(formula_tokens(f))`` without expanding numerals."""
    n = 0
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, QUANTIFIERS):
            n += 4
            stack.append(g.body)
        elif isinstance(g, Turnstile):
            n += 1
            stack.append(g.body)
        elif isinstance(g, Eq):
            n += 3 + _term_token_count(g.left) + _term_token_count(g.right)
        elif isinstance(g, Not):
            n += 3
            stack.append(g.f)
        elif type(g) in _BINARY_TOKEN:
            n += 3
            stack.extend((g.a, g.b))
        elif isinstance(g, Pred):
            n += 2 + max(len(g.args) - 1, 0) + sum(_term_token_count(a) for a in g.args)
        else:
            raise TypeError(f"not a formula: {g!r}")
    return n


def print_formula(f: Formula, compact: bool = False) -> str:
    """Fully parenthesized canonical text.

    With ``compact=True`` numerals of value >= 2 are abbreviated as ``[n]``;
    that form is for display only and is not accepted by :func:`parse`.
    """
    if compact:
        f = _compact(f)
    return "".join(formula_tokens(f))


def print_term(t: Term) -> str:
    out: list[str] = []
    _term_tokens(t, out)
    return "".join(out)


def _compact(f: Formula) -> Formula:
    def ct(t):
        if isinstance(t, Numeral) and t.value >= 2:
            return Var(f"[{t.value}]")
        if isinstance(t, Mul):
            return Mul(ct(t.left), ct(t.right))
        if type(t) is Add:
            return Add(ct(t.left), ct(t.right))
        return t
    return _map_terms(f, ct)


def _map_terms(f: Formula, fn) -> Formula:
    if isinstance(f, Eq):
        return Eq(fn(f.left), fn(f.right))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(fn(a) for a in f.args))
    if isinstance(f, Not):
        return Not(_map_terms(f.f, fn))
    if isinstance(f, Turnstile):
        return Turnstile(_map_terms(f.body, fn))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, _map_terms(f.body, fn))
    return type(f)(_map_terms(f.a, fn), _map_terms(f.b, fn))


# ---------------------------------------------------------------- parsing

class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1,
                 expected: Iterable[str] = ()):
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<tok>\|=PP|=>|E!|[()+*=~&|,01])
  | (?P<var>[a-z][0-9]*)
  | (?P<name>[A-Z][A-Z0-9_]*)
""", re.VERBOSE)

VAR_RE = re.compile(r"[a-z][0-9]*\Z")
PRED_NAME_RE = re.compile(r"[A-Z][A-Z0-9_]*\Z")


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        if m.lastgroup != "ws":
            tokens.append(Token(m.group(), line, pos - line_start + 1))
        else:
            nl = m.group().count("\n")
            if nl:
                line += nl
                line_start = pos + m.group().rfind("\n") + 1
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], predicates):
        self.toks = tokens
        self.pos = 0
        self.predicates = predicates
        self.best = (-1, set())  # furthest failure position and expected tokens

    def peek(self, k: int = 0) -> str | None:
        i = self.pos + k
        return self.toks[i].text if i < len(self.toks) else None

    def fail(self, expected: Iterable[str]):
        if self.pos > self.best[0]:
            self.best = (self.pos, set(expected))
        elif self.pos == self.best[0]:
            self.best[1].update(expected)
        raise _Backtrack()

    def expect(self, text: str) -> None:
        if self.peek() != text:
            self.fail([repr(text)])
        self.pos += 1

    def error(self) -> ParseError:
        pos, expected = self.best
        if pos < 0:
            pos = self.pos
        if pos < len(self.toks):
            tok = self.toks[pos]
            return ParseError(f"unexpected token {tok.text!r}", tok.line, tok.column, expected)
        last = self.toks[-1] if self.toks else Token("", 1, 0)
        return ParseError("unexpected end of input", last.line,
                          last.column + len(last.text), expected)

    # formulas
    def formula(self) -> Formula:
        left = self.disj()
        if self.peek() == "=>":
            self.pos += 1
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.pos += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.pos += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        t = self.peek()
        if t == "~":
            self.pos += 1
            return Not(self.unary())
        if t == "|=PP":
            self.pos += 1
            return Turnstile(self.unary())
        if t == "(" and self.peek(1) in ("A", "E", "E!") and self.peek(3) == ")":
            var = self.peek(2)
            if var is None or not VAR_RE.match(var):
                self.pos += 2
                self.fail(["variable"])
            kind = {"A": ForAll, "E": Exists, "E!": ExistsUnique}[self.peek(1)]
            self.pos += 4
            return kind(var, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        t = self.peek()
        if t is not None and PRED_NAME_RE.match(t) and t not in ("A", "E"):
            start = self.pos
            self.pos += 1
            if t not in self.predicates:
                self.pos = start
                tok = self.toks[start]
                raise ParseError(f"unregistered defined predicate {t!r}", tok.line, tok.column)
            self.expect("(")
            args = [self.term()]
            while self.peek() == ",":
                self.pos += 1
                args.append(self.term())
            self.expect(")")
            return Pred(t, tuple(args))
        start = self.pos
        try:
            left = self.term()
            self.expect("=")
            return Eq(left, self.term())
        except _Backtrack:
            self.pos = start
        if t == "(":
            self.pos += 1
            f = self.formula()
            self.expect(")")
            return f
        self.fail(["'~'", "'|=PP'", "'('", "term", "predicate"])

    # terms
    def term(self) -> Term:
        t = self.product()
        while self.peek() == "+":
            self.pos += 1
            t = Add(t, self.product())
        return t

    def product(self) -> Term:
        t = self.primary()
        while self.peek() == "*":
            self.pos += 1
            t = Mul(t, self.primary())
        return t

    def primary(self) -> Term:
        t = self.peek()
        if t == "0":
            self.pos += 1
            return Zero()
        if t == "1":
            self.pos += 1
            return One()
        if t is not None and VAR_RE.match(t):
            self.pos += 1
            return Var(t)
        if t == "(":
            self.pos += 1
            inner = self.term()
            self.expect(")")
            return inner
        self.fail(["variable", "'0'", "'1'", "'('"])


class _Backtrack(Exception):
    pass


def _predicate_names(table) -> Mapping | frozenset:
    if table is None:
        return frozenset()
    return table.predicate_names()


def parse_tokens(tokens: list[Token], table=None) -> Formula:
    p = _Parser(tokens, _predicate_names(table))
    try:
        f = p.formula()
        if p.pos != len(tokens):
            p.fail(["end of input", "'=>'", "'|'", "'&'"])
    except _Backtrack:
        raise p.error() from None
    return f


def parse(text: str, table=None) -> Formula:
    """Parse formula text. ``table`` supplies the registered predicate names."""
    return parse_tokens(tokenize(text), table)


def parse_term(text: str) -> Term:
    p = _Parser(tokenize(text), frozenset())
    try:
        t = p.term()
        if p.pos != len(p.toks):
            p.fail(["end of input"])
    except _Backtrack:
        raise p.error() from None
    return t


# ---------------------------------------------------------------- variables

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Mul,)) or type(t) is Add:
        return term_vars(t.left) | term_vars(t.right)
    return set()


def free_vars(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Pred):
        out: set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return out
    if isinstance(f, Not):
        return free_vars(f.f)
    if isinstance(f, Turnstile):
        return free_vars(f.body)
    if isinstance(f, QUANTIFIERS):
        return free_vars(f.body) - {f.var}
    return free_vars(f.a) | free_vars(f.b)


def is_proposition(f: Formula) -> bool:
    return not free_vars(f)


def _all_vars(f: Formula) -> set[str]:
    if isinstance(f, Eq):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Pred):
        return set().union(*(term_vars(a) for a in f.args)) if f.args else set()
    if isinstance(f, Not):
        return _all_vars(f.f)
    if isinstance(f, Turnstile):
        return _all_vars(f.body)
    if isinstance(f, QUANTIFIERS):
        return _all_vars(f.body) | {f.var}
    return _all_vars(f.a) | _all_vars(f.b)


def fresh_name(base: str, avoid: set[str]) -> str:
    """``base`` with a numeric suffix appended, avoiding ``avoid``."""
    stem = base[0]
    k = 1
    while f"{stem}{k}" in avoid:
        k += 1
    return f"{stem}{k}"


# ---------------------------------------------------------------- substitution

def _subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Mul):
        return Mul(_subst_term(t.left, mapping), _subst_term(t.right, mapping))
    if type(t) is Add:
        return Add(_subst_term(t.left, mapping), _subst_term(t.right, mapping))
    return t


def substitute_many(f: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    mapping = {v: t for v, t in mapping.items() if not (isinstance(t, Var) and t.name == v)}
    if not mapping:
        return f
    return _subst(f, mapping)


def _subst(f: Formula, mapping: dict[str, Term]) -> Formula:
    if isinstance(f, Eq):
        return Eq(_subst_term(f.left, mapping), _subst_term(f.right, mapping))
    if isinstance(f, Pred):
        return Pred(f.name, tuple(_subst_term(a, mapping) for a in f.args))
    if isinstance(f, Not):
        return Not(_subst(f.f, mapping))
    if isinstance(f, Turnstile):
        return Turnstile(_subst(f.body, mapping))
    if isinstance(f, QUANTIFIERS):
        body_free = free_vars(f.body)
        inner = {v: t for v, t in mapping.items() if v != f.var and v in body_free}
        if not inner:
            return f
        incoming: set[str] = set()
        for t in inner.values():
            incoming |= term_vars(t)
        var, body = f.var, f.body
        if var in incoming:
            avoid = incoming | _all_vars(body) | set(inner)
            new = fresh_name(var, avoid)
            body = _subst(body, {var: Var(new)})
            var = new
        return type(f)(var, _subst(body, inner))
    return type(f)(_subst(f.a, mapping), _subst(f.b, mapping))


def substitute(f: Formula, var: str, t: Term) -> Formula:
    """Replace free occurrences of ``var`` by ``t``, renaming binders to avoid capture."""
    return substitute_many(f, {var: t})


# ---------------------------------------------------------------- PP well-formedness

def _turnstiled(body: Formula) -> bool:
    if isinstance(body, Turnstile):
        return True
    if isinstance(body, QUANTIFIERS):
        return _turnstiled(body.body)
    if isinstance(body, (Implies, And, Or)):
        return isinstance(body.a, Turnstile) and isinstance(body.b, Turnstile)
    return False


def is_pp_wff(f: Formula) -> bool:
    """Every quantifier is followed by the turnstile (directly, through a
    quantifier prefix, or as a connective joining two turnstiled judgments);
    a turnstile never directly wraps another turnstile."""
    if isinstance(f, Turnstile):
        return not isinstance(f.body, Turnstile) and is_pp_wff(f.body)
    if isinstance(f, QUANTIFIERS):
        return _turnstiled(f.body) and is_pp_wff(f.body)
    if isinstance(f, Not):
        return is_pp_wff(f.f)
    if isinstance(f, (Implies, And, Or)):
        return is_pp_wff(f.a) and is_pp_wff(f.b)
    return True


def strip_turnstiles(f: Formula) -> Formula:
    if isinstance(f, Turnstile):
        return strip_turnstiles(f.body)
    if isinstance(f, (Eq, Pred)):
        return f
    if isinstance(f, Not):
        return Not(strip_turnstiles(f.f))
    if isinstance(f, QUANTIFIERS):
        return type(f)(f.var, strip_turnstiles(f.body))
    return type(f)(strip_turnstiles(f.a), strip_turnstiles(f.b))


def iter_subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    if isinstance(f, Not):
        yield from iter_subformulas(f.f)
    elif isinstance(f, (Turnstile,) + QUANTIFIERS):
        yield from iter_subformulas(f.body)
    elif isinstance(f, (Implies, And, Or)):
        yield from iter_subformulas(f.a)
        yield from iter_subformulas(f.b)
