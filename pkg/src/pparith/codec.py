"""Prime-power Gödel numbering of token sequences, formulas and proofs.

Token codes come from a :class:`SymbolTable`.  The fixed alphabet gets codes
1..16 in grammar order; variables and registered predicates interleave above
that (variables odd, predicates even) so every table is injective without
ever listing the countably many variables.

Proof codes have formula codes as exponents and are far too large to
materialize, so :func:`encode_proof` returns a :class:`ProofCode`, a Gödel
number kept in factored form.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from functools import total_ordering
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .syntax import (
    VAR_RE, PRED_NAME_RE, Formula, ParseError, Token, formula_tokens, parse_tokens,
)

__all__ = [
    "NotACode", "CodecError", "BASE_TOKENS", "SymbolTable", "ProofCode",
    "primes", "nth_prime", "encode_sequence", "decode_sequence", "is_code",
    "encode_formula", "decode_formula", "encode_proof", "decode_proof",
    "FormulaCode", "formula_code", "token_count",
]

BASE_TOKENS = ("(", ")", "0", "1", "+", "*", "=", "~", "=>", "&", "|",
               "A", "E", "E!", "|=PP", ",")


class CodecError(ValueError):
    pass


class NotACode(CodecError):
    """The number is not the code of any sequence (or of any formula)."""


# ---------------------------------------------------------------- primes

_primes: list[int] = [2, 3, 5, 7, 11, 13]
_prime_lock = threading.Lock()


def _extend_primes(count: int) -> None:
    # incremental segmented sieve over the next block
    with _prime_lock:
        while len(_primes) < count:
            lo = _primes[-1] + 1
            # known primes only sieve out composites below the last prime squared
            hi = min(max(lo * 2, lo + 1024), _primes[-1] ** 2 + 1)
            seg = bytearray([1]) * (hi - lo)
            for p in _primes:
                if p * p >= hi:
                    break
                start = max(p * p, (lo + p - 1) // p * p)
                seg[start - lo::p] = bytearray(len(seg[start - lo::p]))
            _primes.extend(lo + i for i, ok in enumerate(seg) if ok)


def nth_prime(i: int) -> int:
    """The i-th prime, 0-based (nth_prime(0) == 2)."""
    if i >= len(_primes):
        _extend_primes(i + 1)
    return _primes[i]


def primes(count: int) -> list[int]:
    if count > len(_primes):
        _extend_primes(count)
    return _primes[:count]


# ---------------------------------------------------------------- sequences

def encode_sequence(codes: Sequence[int]) -> int:
    """``prod(p_i ** c_i)`` over the first ``len(codes)`` primes; ``[] -> 1``."""
    n = 1
    for p, c in zip(primes(len(codes)), codes):
        if c < 1:
            raise CodecError(f"sequence elements must be >= 1, got {c}")
        n *= p ** c
    return n


def decode_sequence(n) -> list[int]:
    """Inverse of :func:`encode_sequence`; raises NotACode on 0 or a prime gap."""
    if isinstance(n, ProofCode):
        return list(n.exponents)
    n = int(n)
    if n < 1:
        raise NotACode(f"{n} is not a code")
    out = []
    i = 0
    while n > 1:
        p = nth_prime(i)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e == 0:
            raise NotACode(f"prime gap at {p}")
        out.append(e)
        i += 1
    return out


def is_code(n) -> bool:
    try:
        decode_sequence(n)
    except NotACode:
        return False
    return True


@total_ordering
class FormulaCode:
    """The Gödel number of a formula too long to encode, kept as the formula.

    Encoding is injective, so equality of codes is equality of formulas.  The
    value is materialized only below :attr:`MAX_TOKENS` tokens; beyond that it
    exceeds any integer held in memory, which fixes its order against ints.
    """

    MAX_TOKENS = 100_000

    __slots__ = ("formula", "table")

    def __init__(self, formula: Formula, table: "SymbolTable"):
        object.__setattr__(self, "formula", formula)
        object.__setattr__(self, "table", table)

    def __setattr__(self, key, value):
        raise AttributeError("FormulaCode is immutable")

    def materializable(self) -> bool:
        return token_count(self.formula) <= self.MAX_TOKENS

    def __int__(self) -> int:
        if not self.materializable():
            raise OverflowError("formula has too many tokens to encode; kept symbolically")
        return encode_formula(self.formula, self.table)

    def __eq__(self, other):
        if isinstance(other, FormulaCode):
            return self.formula == other.formula
        if isinstance(other, int):
            return self.materializable() and int(self) == other
        return NotImplemented

    def __hash__(self):
        return hash(("FormulaCode", self.formula))

    def __lt__(self, other):
        if isinstance(other, int):
            return self.materializable() and int(self) < other
        if isinstance(other, FormulaCode):
            if self.materializable() and other.materializable():
                return int(self) < int(other)
            return token_count(self.formula) < token_count(other.formula)
        return NotImplemented

    def __repr__(self):
        from .syntax import print_formula
        return f"FormulaCode({print_formula(self.formula, compact=True)})"


@total_ordering
class ProofCode:
    """A Gödel number ``prod(p_i ** e_i)`` held as its exponent list."""

    # int() is refused past this many bits
    MAX_BITS = 1 << 22

    __slots__ = ("exponents",)

    def __init__(self, exponents: Iterable):
        exps = tuple(e if isinstance(e, FormulaCode) else int(e) for e in exponents)
        if any(isinstance(e, int) and e < 1 for e in exps):
            raise CodecError("exponents must be >= 1")
        object.__setattr__(self, "exponents", exps)

    def __setattr__(self, key, value):
        raise AttributeError("ProofCode is immutable")

    @property
    def symbolic(self) -> bool:
        return any(isinstance(e, FormulaCode) for e in self.exponents)

    def log2(self) -> float:
        """log2 of the value; ``inf`` when the exponents exceed float range."""
        if self.symbolic or any(e.bit_length() > 1000 for e in self.exponents):
            return math.inf
        return sum(e * math.log2(p) for p, e in zip(primes(len(self.exponents)), self.exponents))

    def __int__(self) -> int:
        if self.log2() > self.MAX_BITS:
            raise OverflowError(f"code has about 2^{self.log2():.3g} bits worth of value; "
                                "kept in factored form")
        return encode_sequence(self.exponents)

    __index__ = __int__

    def _other(self, other):
        if isinstance(other, ProofCode):
            return other
        if isinstance(other, int):
            try:
                return ProofCode(decode_sequence(other))
            except NotACode:
                return None
        return NotImplemented

    def __eq__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o is not None and o.exponents == self.exponents

    def __hash__(self):
        return hash(("ProofCode", self.exponents))

    def __lt__(self, other):
        if isinstance(other, int):
            if self.log2() > other.bit_length() + 1:
                return False
            return int(self) < other
        if not isinstance(other, ProofCode):
            return NotImplemented
        if self.exponents == other.exponents:
            return False
        if self.symbolic or other.symbolic:
            raise TypeError("proof codes with symbolic exponents are not ordered")
        return _log_compare(self.exponents, other.exponents) < 0

    def __repr__(self):
        if self.symbolic:
            return f"ProofCode(<{len(self.exponents)} exponents, some symbolic>)"
        if len(self.exponents) <= 3 and all(e < 10 ** 6 for e in self.exponents):
            return f"ProofCode({list(self.exponents)})"
        widest = max(e.bit_length() for e in self.exponents)
        return f"ProofCode(<{len(self.exponents)} exponents, widest {widest} bits>)"

    def to_text(self) -> str:
        """Decimal exponents joined by ``.``; round-trips through :meth:`from_text`."""
        if self.symbolic:
            raise OverflowError("symbolic exponents have no decimal form")
        return ".".join(str(e) for e in self.exponents)

    @classmethod
    def from_text(cls, text: str) -> "ProofCode":
        return cls(int(part) for part in text.strip().split("."))


def _log_compare(a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Sign of log(code a) - log(code b), exact to high precision."""
    import mpmath

    digits = max(max(a, default=1).bit_length(), max(b, default=1).bit_length()) // 3 + 40
    with mpmath.workdps(digits):
        la = mpmath.fsum(mpmath.mpf(e) * mpmath.log(p) for p, e in zip(primes(len(a)), a))
        lb = mpmath.fsum(mpmath.mpf(e) * mpmath.log(p) for p, e in zip(primes(len(b)), b))
        if la == lb:
            # equal logs at this precision only when the codes coincide
            return 0
        return -1 if la < lb else 1


# ---------------------------------------------------------------- symbol table

_BASE_COUNT = len(BASE_TOKENS)


def _suffix_index(digits: str) -> int:
    # bijective base-11 reading, so "1" and "01" get different indices
    k = 0
    for ch in digits:
        k = k * 11 + int(ch) + 1
    return k


def _suffix_digits(k: int) -> str:
    out = []
    while k:
        k, r = divmod(k, 11)
        if r == 0:
            raise CodecError("not a variable index")
        out.append(str(r - 1))
    return "".join(reversed(out))


@dataclass
class PredicateEntry:
    name: str
    code: int
    arity: int | None = None
    evaluator: Callable[..., bool] | None = None


@dataclass
class SymbolTable:
    """Injective token coding; predicate registration is append-only."""

    predicates: dict[str, PredicateEntry] = field(default_factory=dict)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    base_codes = {tok: i + 1 for i, tok in enumerate(BASE_TOKENS)}

    def predicate_names(self) -> frozenset[str]:
        return frozenset(self.predicates)

    def register(self, name: str, arity: int | None = None,
                 evaluator: Callable[..., bool] | None = None) -> PredicateEntry:
        if not PRED_NAME_RE.match(name) or name in ("A", "E"):
            raise CodecError(f"invalid predicate name {name!r}")
        with self._lock:
            if name in self.predicates:
                raise CodecError(f"predicate {name!r} already registered")
            code = _BASE_COUNT + 2 * len(self.predicates) + 2
            entry = PredicateEntry(name, code, arity, evaluator)
            self.predicates[name] = entry
            return entry

    def attach(self, name: str, arity: int, evaluator: Callable[..., bool]) -> None:
        """Give a registered (e.g. file-loaded) predicate its arity and meaning."""
        entry = self.predicates[name]
        if entry.evaluator is not None:
            raise CodecError(f"predicate {name!r} already has an evaluator")
        entry.arity = arity
        entry.evaluator = evaluator

    def code(self, token: str) -> int:
        if token in self.base_codes:
            return self.base_codes[token]
        if VAR_RE.match(token):
            k = _suffix_index(token[1:]) * 26 + (ord(token[0]) - ord("a"))
            return _BASE_COUNT + 2 * k + 1
        entry = self.predicates.get(token)
        if entry is None:
            raise CodecError(f"unregistered symbol {token!r}")
        return entry.code

    def token(self, code: int) -> str:
        if 1 <= code <= _BASE_COUNT:
            return BASE_TOKENS[code - 1]
        if code > _BASE_COUNT:
            rest = code - _BASE_COUNT
            if rest % 2:
                k = (rest - 1) // 2
                suffix, letter = divmod(k, 26)
                try:
                    return chr(ord("a") + letter) + _suffix_digits(suffix)
                except CodecError:
                    pass
            else:
                j = rest // 2 - 1
                names = list(self.predicates)
                if j < len(names):
                    return names[j]
        raise NotACode(f"{code} is not a symbol code")

    def to_text(self) -> str:
        lines = [f"{tok}\t{code}" for tok, code in self.base_codes.items()]
        lines += [f"{e.name}\t{e.code}" for e in self.predicates.values()]
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.to_text())

    @classmethod
    def from_text(cls, text: str) -> "SymbolTable":
        table = cls()
        seen_base = 0
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip():
                continue
            try:
                tok, code_s = raw.split("\t")
                code = int(code_s)
            except ValueError:
                raise CodecError(f"line {lineno}: expected 'token<TAB>code'") from None
            if seen_base < _BASE_COUNT:
                if table.base_codes.get(tok) != code or BASE_TOKENS[seen_base] != tok:
                    raise CodecError(f"line {lineno}: base table mismatch at {tok!r}")
                seen_base += 1
                continue
            entry = table.register(tok)
            if entry.code != code:
                raise CodecError(f"line {lineno}: {tok!r} has code {code}, expected {entry.code}")
        if seen_base != _BASE_COUNT:
            raise CodecError("symbol table file is missing base tokens")
        return table

    @classmethod
    def load(cls, path) -> "SymbolTable":
        return cls.from_text(Path(path).read_text())


# ---------------------------------------------------------------- formulas and proofs

def token_count(f: Formula) -> int:
    """Length of the canonical token sequence, without building it."""
    from .syntax import formula_token_count
    return formula_token_count(f)


def encode_formula(f: Formula, table: SymbolTable) -> int:
    return encode_sequence([table.code(t) for t in formula_tokens(f)])


def formula_code(f: Formula, table: SymbolTable):
    """``encode_formula`` when feasible, else a :class:`FormulaCode`."""
    if token_count(f) > FormulaCode.MAX_TOKENS:
        return FormulaCode(f, table)
    return encode_formula(f, table)


def decode_formula(n, table: SymbolTable) -> Formula:
    if isinstance(n, FormulaCode):
        return n.formula
    codes = decode_sequence(n)
    if not codes:
        raise NotACode("empty token sequence")
    toks = [Token(table.token(c), 1, i + 1) for i, c in enumerate(codes)]
    try:
        return parse_tokens(toks, table)
    except ParseError as e:
        raise NotACode(f"token sequence does not parse: {e}") from None


def encode_proof(proof, table: SymbolTable) -> ProofCode:
    """Code of the proof's formula sequence; justifications are not encoded."""
    formulas = [getattr(line, "formula", line) for line in getattr(proof, "lines", proof)]
    if not formulas:
        raise CodecError("a proof has at least one line")
    return ProofCode(formula_code(f, table) for f in formulas)


def decode_proof(n, table: SymbolTable, max_lines: int | None = None) -> list[Formula]:
    codes = decode_sequence(n)
    if not codes:
        raise NotACode("empty proof")
    if max_lines is not None and len(codes) > max_lines:
        raise CodecError(f"proof has {len(codes)} lines, limit {max_lines}")
    return [decode_formula(c, table) for c in codes]
