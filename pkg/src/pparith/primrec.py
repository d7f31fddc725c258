"""Primitive recursive functions: constructors, evaluation, a small library.

Functions are trees of five constructors.  ``PrimRec(base, step)`` recurses on
its *last* argument::

    h(xs, 0)     = base(xs)
    h(xs, y + 1) = step(xs, y, h(xs, y))

Evaluation memoizes each PrimRec node's value sequence per prefix ``xs`` so
that repeated calls extend earlier work instead of recomputing it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Sequence

__all__ = [
    "PrfFn", "ZeroFn", "SuccFn", "Proj", "Comp", "PrimRec", "Procedure", "Predicate",
    "ArityError", "evaluate", "const", "library", "to_text", "from_text",
]

# PrimRec value lists stop being memoized past this length.
MEMO_LIMIT = 1 << 16


class ArityError(ValueError):
    pass


class PrfFn:
    arity: int

    def __call__(self, *args: int) -> int:
        return evaluate(self, list(args))


@dataclass(frozen=True, eq=False)
class ZeroFn(PrfFn):
    arity: int = 1


@dataclass(frozen=True, eq=False)
class SuccFn(PrfFn):
    arity: int = 1


@dataclass(frozen=True, eq=False)
class Proj(PrfFn):
    index: int  # 1-based
    arity: int

    def __post_init__(self):
        if not 1 <= self.index <= self.arity:
            raise ArityError(f"projection index {self.index} out of range for arity {self.arity}")


@dataclass(frozen=True, eq=False)
class Comp(PrfFn):
    outer: PrfFn
    inners: tuple[PrfFn, ...]
    arity: int = field(default=-1)

    def __post_init__(self):
        inners = tuple(self.inners)
        object.__setattr__(self, "inners", inners)
        if len(inners) != self.outer.arity:
            raise ArityError(f"outer arity {self.outer.arity} != {len(inners)} inner functions")
        arities = {g.arity for g in inners}
        if len(arities) > 1:
            raise ArityError(f"inner functions disagree on arity: {sorted(arities)}")
        if arities:
            (k,) = arities
            if self.arity not in (-1, k):
                raise ArityError("declared arity does not match inner functions")
            object.__setattr__(self, "arity", k)
        elif self.arity < 0:
            raise ArityError("Comp of a 0-ary outer function needs an explicit arity")


@dataclass(frozen=True, eq=False)
class PrimRec(PrfFn):
    base: PrfFn
    step: PrfFn
    arity: int = field(default=-1)
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        k = self.base.arity
        if self.step.arity != k + 2:
            raise ArityError(f"step arity {self.step.arity} != base arity {k} + 2")
        if self.arity not in (-1, k + 1):
            raise ArityError("declared arity does not match base")
        object.__setattr__(self, "arity", k + 1)


@dataclass(frozen=True, eq=False)
class Procedure(PrfFn):
    """A total function given as Python code; used for prf and q."""

    name: str
    arity: int
    func: Callable[..., int] = field(repr=False)


@dataclass(frozen=True)
class Predicate:
    """Characteristic function: 1 is true, 0 is false."""

    fn: PrfFn

    @property
    def arity(self) -> int:
        return self.fn.arity

    def __call__(self, *args: int) -> int:
        v = evaluate(self.fn, list(args))
        if v not in (0, 1):
            raise ValueError(f"characteristic function returned {v}")
        return v


def evaluate(f: PrfFn, args: Sequence[int]) -> int:
    if len(args) != f.arity:
        raise ArityError(f"expected {f.arity} arguments, got {len(args)}")
    if any(a < 0 for a in args):
        raise ValueError("arguments must be natural numbers")
    return _ev(f, tuple(args))


def _ev(f: PrfFn, args: tuple) -> int:
    t = type(f)
    if t is Proj:
        return args[f.index - 1]
    if t is SuccFn:
        return args[0] + 1
    if t is ZeroFn:
        return 0
    if t is Comp:
        return _ev(f.outer, tuple([_ev(g, args) for g in f.inners]))
    if t is PrimRec:
        xs, y = args[:-1], args[-1]
        seq = f._memo.get(xs)
        if seq is None:
            seq = f._memo[xs] = [_ev(f.base, xs)]
        if y < len(seq):
            return seq[y]
        step = f.step
        i, acc = len(seq) - 1, seq[-1]
        while i < y:
            acc = _ev(step, xs + (i, acc))
            i += 1
            if len(seq) < MEMO_LIMIT:
                seq.append(acc)
        return acc
    if t is Procedure:
        return int(f.func(*args))
    raise TypeError(f"not a primitive recursive function: {f!r}")


def clear_memo(f: PrfFn) -> None:
    if isinstance(f, PrimRec):
        f._memo.clear()
        clear_memo(f.base)
        clear_memo(f.step)
    elif isinstance(f, Comp):
        clear_memo(f.outer)
        for g in f.inners:
            clear_memo(g)


# ---------------------------------------------------------------- library

def const(n: int, arity: int) -> PrfFn:
    f: PrfFn = ZeroFn(arity)
    for _ in range(n):
        f = Comp(SuccFn(), (f,))
    return f


def _p(i: int, k: int) -> Proj:
    return Proj(i, k)


def _c(outer: PrfFn, *inners: PrfFn) -> Comp:
    return Comp(outer, inners)


def _build_library() -> dict[str, PrfFn]:
    lib: dict[str, PrfFn] = {}
    succ = SuccFn()
    lib["successor"] = succ
    lib["predecessor"] = pred = PrimRec(ZeroFn(0), _p(1, 2))
    lib["addition"] = add = PrimRec(_p(1, 1), _c(succ, _p(3, 3)))
    lib["multiplication"] = mul = PrimRec(ZeroFn(1), _c(add, _p(3, 3), _p(1, 3)))
    # m^(n+1) = m * m^n, recursion of the product on the small factor
    lib["exponential"] = PrimRec(const(1, 1), _c(mul, _p(3, 3), _p(1, 3)))
    # 0! = 1, (n+1)! = (n+1) * n!
    lib["factorial"] = PrimRec(const(1, 0), _c(mul, _c(succ, _p(1, 2)), _p(2, 2)))
    # monus(x, y) = x - y truncated at 0
    lib["monus"] = monus = PrimRec(_p(1, 1), _c(pred, _p(3, 3)))
    # sg(y) = 1 if y > 0 else 0; is_zero is its complement
    lib["sg"] = sg = PrimRec(ZeroFn(0), const(1, 2))
    lib["is_zero"] = is_zero = PrimRec(const(1, 0), ZeroFn(2))
    lib["less_than"] = lt = _c(sg, _c(monus, _p(2, 2), _p(1, 2)))
    lib["equal"] = eq = _c(is_zero, _c(add, _c(monus, _p(1, 2), _p(2, 2)),
                                           _c(monus, _p(2, 2), _p(1, 2))))
    # rem_by(d, x) = x mod d, with x mod 0 = 0; recursion on x
    r1 = _c(succ, _p(3, 3))
    rem_by = PrimRec(ZeroFn(1), _c(mul, r1, _c(sg, _c(monus, _p(1, 3), r1))))
    lib["remainder"] = _c(rem_by, _p(2, 2), _p(1, 2))
    # quot_by(d, x) = x div d, with x div 0 = 0
    quot_by = PrimRec(ZeroFn(1), _c(add, _p(3, 3), _c(
        mul, _c(sg, _p(1, 3)), _c(is_zero, _c(rem_by, _p(1, 3), _c(succ, _p(2, 3)))))))
    lib["quotient"] = _c(quot_by, _p(2, 2), _p(1, 2))
    # divides(d, n); 0 divides only 0
    lib["divides"] = divides = _c(mul, _c(is_zero, rem_by), _c(sg, _c(
        add, _c(sg, _p(1, 2)), _c(is_zero, _p(2, 2)))))
    # count(n, k) = #{d < k : d divides n}
    count = PrimRec(ZeroFn(1), _c(add, _p(3, 3), _c(divides, _p(2, 3), _p(1, 3))))
    lib["is_prime"] = is_prime = _c(eq, _c(count, _p(1, 1), _c(succ, _p(1, 1))), const(2, 1))

    def least(test: PrfFn) -> PrfFn:
        # least(x, k) = least z < k with test(x, z) = 1, else k
        found = _c(lt, _p(3, 3), _p(2, 3))
        fresh = _c(add, _p(2, 3), _c(is_zero, _c(test, _p(1, 3), _p(2, 3))))
        return PrimRec(ZeroFn(1), _c(add, _c(mul, _p(3, 3), found),
                                     _c(mul, _c(is_zero, found), fresh)))

    # next_prime(p) = least prime z in (p, 2p + 2), by Bertrand's postulate
    bigger_prime = _c(mul, _c(lt, _p(1, 2), _p(2, 2)), _c(is_prime, _p(2, 2)))
    next_prime = _c(least(bigger_prime), _p(1, 1), _c(add, _c(add, _p(1, 1), _p(1, 1)), const(2, 1)))
    lib["next_prime"] = next_prime
    # nth_prime(0) = 2
    lib["nth_prime"] = nth = PrimRec(const(2, 0), _c(next_prime, _p(2, 2)))
    # capped_pow(p, cap, k) = min(p^k, cap)
    cmin = _c(monus, _p(1, 2), _c(monus, _p(1, 2), _p(2, 2)))
    capped_pow = PrimRec(_c(cmin, const(1, 2), _p(2, 2)),
                         _c(cmin, _c(mul, _p(4, 4), _p(1, 4)), _p(2, 4)))
    # prime_exponent(n, p) = #{1 <= k <= n : p^k divides n} for p >= 2
    hit = _c(mul, _c(sg, _p(1, 4)),
             _c(divides, _c(capped_pow, _p(2, 4), _c(succ, _p(1, 4)), _c(succ, _p(3, 4))), _p(1, 4)))
    count_hits = PrimRec(_c(ZeroFn(1), _p(1, 2)), _c(add, _p(4, 4), hit))
    lib["prime_exponent"] = _c(count_hits, _p(1, 2), _p(2, 2), _p(1, 2))
    # seq_length(n) = #{i < n : nth_prime(i) divides n}
    seq_hit = _c(add, _p(3, 3), _c(divides, _c(nth, _p(2, 3)), _p(1, 3)))
    lib["sequence_length"] = _c(PrimRec(ZeroFn(1), seq_hit), _p(1, 1), _p(1, 1))
    return lib


_LIBRARY: dict[str, PrfFn] | None = None


def library() -> dict[str, PrfFn]:
    """Named functions; predicates (is_prime, less_than, ...) return 0/1."""
    global _LIBRARY
    if _LIBRARY is None:
        _LIBRARY = _build_library()
    return dict(_LIBRARY)


# ---------------------------------------------------------------- text form

def to_text(f: PrfFn) -> str:
    if isinstance(f, ZeroFn):
        return f"ZeroFn(arity={f.arity})"
    if isinstance(f, SuccFn):
        return "SuccFn"
    if isinstance(f, Proj):
        return f"Proj(index={f.index}, arity={f.arity})"
    if isinstance(f, Comp):
        inner = ", ".join(to_text(g) for g in f.inners)
        if not f.inners:
            return f"Comp(outer={to_text(f.outer)}, inners=[], arity={f.arity})"
        return f"Comp(outer={to_text(f.outer)}, inners=[{inner}])"
    if isinstance(f, PrimRec):
        return f"PrimRec(base={to_text(f.base)}, step={to_text(f.step)})"
    if isinstance(f, Procedure):
        return f"Procedure(name={f.name}, arity={f.arity})"
    raise TypeError(f"not a primitive recursive function: {f!r}")


_TEXT_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|\d+|[()=,\[\]])")


def from_text(text: str, procedures: dict[str, Procedure] | None = None) -> PrfFn:
    toks = _TEXT_TOKEN.findall(text)
    if "".join(toks) != re.sub(r"\s+", "", text):
        raise ValueError("unrecognized characters in function text")
    pos = 0

    def take(expected: str | None = None) -> str:
        nonlocal pos
        if pos >= len(toks):
            raise ValueError("unexpected end of function text")
        tok = toks[pos]
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        pos += 1
        return tok

    def kw(name: str) -> None:
        take(name)
        take("=")

    def node() -> PrfFn:
        head = take()
        if head == "SuccFn":
            return SuccFn()
        take("(")
        if head == "ZeroFn":
            kw("arity"); f = ZeroFn(int(take()))
        elif head == "Proj":
            kw("index"); i = int(take()); take(","); kw("arity")
            f = Proj(i, int(take()))
        elif head == "Comp":
            kw("outer"); outer = node(); take(","); kw("inners"); take("[")
            inners = []
            while toks[pos] != "]":
                inners.append(node())
                if toks[pos] == ",":
                    take(",")
            take("]")
            arity = -1
            if toks[pos] == ",":
                take(","); kw("arity"); arity = int(take())
            f = Comp(outer, tuple(inners), arity)
        elif head == "PrimRec":
            kw("base"); base = node(); take(","); kw("step")
            f = PrimRec(base, node())
        elif head == "Procedure":
            kw("name"); name = take(); take(","); kw("arity"); arity = int(take())
            if not procedures or name not in procedures:
                raise ValueError(f"unknown procedure {name!r}")
            f = procedures[name]
            if f.arity != arity:
                raise ArityError(f"procedure {name!r} has arity {f.arity}")
        else:
            raise ValueError(f"unknown constructor {head!r}")
        take(")")
        return f

    f = node()
    if pos != len(toks):
        raise ValueError("trailing text after function")
    return f
