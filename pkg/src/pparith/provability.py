"""The proof-pair predicate prf and the self-reference predicate q.

Both are ordinary total procedures rather than literal PrfFn trees.  Each
step is a bounded search over the input: prime-exponent decoding loops at
most ``log2 k`` times, token decoding is a table lookup, parsing and the
kernel check are linear passes over a finite line list whose justification
candidates are drawn from earlier lines.  Every loop has a bound computable
from the input, which is what makes the composite primitive recursive.

Inputs past the configured limits give 0; the reason is kept per thread and
read back with :func:`explain`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .codec import (
    CodecError, FormulaCode, NotACode, ProofCode, SymbolTable, decode_formula, decode_proof,
    decode_sequence,
)
from .kernel import check_formulas, get_system
from .primrec import Predicate, Procedure
from .syntax import free_vars, numeral, substitute

__all__ = ["build_prf", "build_q", "explain", "ProvabilityLimits", "DEFAULT_LIMITS"]


@dataclass(frozen=True)
class ProvabilityLimits:
    max_lines: int = 200
    max_bits: int = 1 << 14  # plain-int proof codes longer than this are refused


DEFAULT_LIMITS = ProvabilityLimits()


@dataclass(eq=False)
class _Checker:
    name: str
    system: object
    table: SymbolTable
    limits: ProvabilityLimits
    _local: threading.local = field(default_factory=threading.local, repr=False)

    @property
    def last_reason(self) -> str:
        return getattr(self._local, "reason", "")

    def _no(self, reason: str) -> int:
        self._local.reason = reason
        return 0

    def _yes(self) -> int:
        self._local.reason = "accepted"
        return 1

    def _exponents(self, k):
        if not isinstance(k, ProofCode):
            if int(k).bit_length() > self.limits.max_bits:
                return None, f"code has {int(k).bit_length()} bits, limit {self.limits.max_bits}"
        try:
            exps = decode_sequence(k)
        except NotACode as e:
            return None, f"not a proof code: {e}"
        if not exps:
            return None, "empty sequence"
        if len(exps) > self.limits.max_lines:
            return None, f"proof has {len(exps)} lines, limit {self.limits.max_lines}"
        return exps, ""

    def _proof_ok(self, k, last_ok) -> int:
        exps, why = self._exponents(k)
        if exps is None:
            return self._no(why)
        try:
            formulas = decode_proof(ProofCode(exps), self.table)
        except CodecError as e:
            return self._no(f"line does not decode: {e}")
        why = last_ok(exps, formulas)
        if why:
            return self._no(why)
        verdict = check_formulas(formulas, self.system)
        if not verdict.accepted:
            bad = verdict.failures[0]
            return self._no(f"kernel rejects line {bad.index}: {bad.reason}")
        return self._yes()


@dataclass(eq=False)
class _Prf(_Checker):
    def __call__(self, k, m) -> int:
        def last_ok(exps, formulas):
            return "" if exps[-1] == m else "last line's code differs from m"
        return self._proof_ok(k, last_ok)


@dataclass(eq=False)
class _Q(_Checker):
    def __call__(self, x, y) -> int:
        if isinstance(x, FormulaCode) or isinstance(x, ProofCode):
            return self._no("x must be a plain natural number")
        target, why = self._target(x)
        if target is None:
            return self._no(why)

        def last_ok(exps, formulas):
            # same as comparing codes, since encoding is injective
            return "" if formulas[-1] == target else "last line is not H with numeral(x) substituted"
        return self._proof_ok(y, last_ok)

    def _target(self, x):
        # sampling loops fix x and vary y, so keep the last decoding
        cached = getattr(self._local, "target", None)
        if cached is not None and cached[0] == x:
            return cached[1]
        try:
            h = decode_formula(x, self.table)
        except CodecError as e:
            out = (None, f"x is not a formula code: {e}")
        else:
            fv = free_vars(h)
            if len(fv) != 1:
                out = (None, f"formula has {len(fv)} free variables, need exactly one")
            else:
                (z,) = fv
                out = (substitute(h, z, numeral(x)), "")
        self._local.target = (x, out)
        return out


def build_prf(system, table: SymbolTable, limits: ProvabilityLimits = DEFAULT_LIMITS) -> Predicate:
    """prf(k, m) = 1 iff k codes a proof accepted under ``system`` whose last line has code m."""
    impl = _Prf("prf", get_system(system), table, limits)
    return Predicate(Procedure("prf", 2, impl))


def build_q(system, table: SymbolTable, limits: ProvabilityLimits = DEFAULT_LIMITS) -> Predicate:
    """q(x, y) = 1 iff x codes H(z) with one free variable and y codes a proof of H(numeral(x))."""
    impl = _Q("q", get_system(system), table, limits)
    return Predicate(Procedure("q", 2, impl))


def explain(pred: Predicate) -> str:
    """Reason for the last verdict of a prf or q predicate on this thread."""
    return pred.fn.func.last_reason
