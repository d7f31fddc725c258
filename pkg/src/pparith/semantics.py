"""Truth of closed formulas over the natural numbers.

Quantifiers range over all naturals; the evaluator decides them by finite
means when it can and answers ``Unknown`` otherwise:

* an existential is searched over a *complete* candidate set when one can be
  derived (a linear equation that fixes the variable, or an upper bound
  implied by an equation such as ``7 = (w*5)+v``), else over
  ``0..witness_bound``; only complete searches may answer False;
* a universal is decided exactly when its body is ``guard => ...`` and the
  guard bounds the variable; otherwise a counterexample is searched for and
  the answer is False or Unknown;
* ``(Ec)(Ed)`` pairs whose variables appear only as the code pair of
  sequence-element subformulas (see :func:`beta_formula`) range over finite
  sequences instead of number pairs.  Every finite sequence has a code pair,
  so this changes nothing semantically, and it lets forced trace values be
  read off instead of searched for.

The turnstile is transparent.  Defined predicates are evaluated through the
symbol table's registered evaluator.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .syntax import (
    Add, And, Eq, Exists, ExistsUnique, ForAll, Formula, Implies, Mul, Not, Numeral,
    One, Or, Pred, Term, Turnstile, Var, Zero, free_vars, print_formula, substitute_many,
    fresh_name, term_vars,
)

__all__ = [
    "TruthVerdict", "TRUE", "FALSE", "eval_closed", "eval_term", "beta", "beta_formula",
    "match_beta", "FreeVariableError",
]


@dataclass(frozen=True)
class TruthVerdict:
    value: bool | None
    reason: str = ""

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __str__(self) -> str:
        if self.value is None:
            return f"Unknown({self.reason})"
        return "True" if self.value else "False"


TRUE = TruthVerdict(True)
FALSE = TruthVerdict(False)


class FreeVariableError(ValueError):
    pass


def beta(c: int, d: int, i: int) -> int:
    """Gödel's sequence-element function ``c mod (1 + (i+1)*d)``."""
    return c % (1 + (i + 1) * d)


def beta_formula(c: Term | str = "c", d: Term | str = "d", i: Term | str = "i",
                 v: Term | str = "v") -> Formula:
    """Formula stating ``v = beta(c, d, i)`` with only ``=``, ``+``, ``*`` and quantifiers:

    ``(Ew)(Eu)((c = (w*m) + v) & ((v+u)+1 = m))`` with ``m = 1+((i+1)*d)``.
    """
    c, d, i, v = (Var(t) if isinstance(t, str) else t for t in (c, d, i, v))
    taken = set().union(*(term_vars(t) for t in (c, d, i, v)))
    w = fresh_name("w", taken)
    u = fresh_name("u", taken | {w})
    m = Add(One(), Mul(Add(i, One()), d))
    return Exists(w, Exists(u, And(
        Eq(c, Add(Mul(Var(w), m), v)),
        Eq(Add(Add(v, Var(u)), One()), m),
    )))


def match_beta(f: Formula):
    """``(c, d, i, v)`` terms if ``f`` has the shape of :func:`beta_formula`, else None."""
    if not isinstance(f, Exists) or not isinstance(f.body, Exists):
        return None
    w, u = f.var, f.body.var
    body = f.body.body
    if w == u or not isinstance(body, And):
        return None
    e1, e2 = body.a, body.b
    if not (isinstance(e1, Eq) and isinstance(e2, Eq)):
        return None
    rhs = e1.right
    if not (isinstance(rhs, Add) and isinstance(rhs.left, Mul) and rhs.left.left == Var(w)):
        return None
    m, v, c = rhs.left.right, rhs.right, e1.left
    if not (isinstance(m, Add) and isinstance(m.left, One) and isinstance(m.right, Mul)):
        return None
    i1, d = m.right.left, m.right.right
    if not (isinstance(i1, Add) and isinstance(i1.right, One)):
        return None
    i = i1.left
    lhs2 = e2.left
    if not (e2.right == m and isinstance(lhs2, Add) and isinstance(lhs2.right, One)
            and isinstance(lhs2.left, Add) and lhs2.left.left == v
            and lhs2.left.right == Var(u)):
        return None
    for t in (c, d, i, v):
        if term_vars(t) & {w, u}:
            return None
    return c, d, i, v


def eval_term(t: Term, env: Mapping[str, int] | None = None) -> int:
    return _tv(t, env or {})


def _tv(t: Term, env) -> int:
    tt = type(t)
    if tt is Numeral:
        return t.value
    if tt is Var:
        val = env[t.name]
        if type(val) is not int:
            raise _Abstract()
        return val
    if tt is Add:
        return _tv(t.left, env) + _tv(t.right, env)
    if tt is Mul:
        a = _tv(t.left, env)
        return 0 if a == 0 else a * _tv(t.right, env)
    if tt is Zero:
        return 0
    if tt is One:
        return 1
    raise TypeError(f"not a term: {t!r}")


class _Abstract(Exception):
    """A term mentions a variable bound to a sequence frame."""


_NO_INFO = None


class _Frame:
    __slots__ = ("values", "pol")

    def __init__(self, pol: bool):
        self.values: dict[int, int] = {}
        self.pol = pol


def _linear(t: Term, v: str, env):
    """``(a, b)`` with ``t = a*v + b`` under ``env``, or None."""
    tt = type(t)
    if tt is Var:
        if t.name == v:
            return 1, 0
        val = env.get(t.name)
        if type(val) is not int:
            return None
        return 0, val
    if tt is Numeral:
        return 0, t.value
    if tt is Zero:
        return 0, 0
    if tt is One:
        return 0, 1
    if tt is Add:
        l = _linear(t.left, v, env)
        if l is None:
            return None
        r = _linear(t.right, v, env)
        if r is None:
            return None
        return l[0] + r[0], l[1] + r[1]
    if tt is Mul:
        l = _linear(t.left, v, env)
        if l is None:
            return None
        r = _linear(t.right, v, env)
        if r is None:
            return None
        if l[0] and r[0]:
            return None
        return l[0] * r[1] + r[0] * l[1], l[1] * r[1]
    return None


def _dominates(t: Term, v: str, env) -> bool:
    """True if value(t) >= value(v) for every assignment of the unknowns."""
    if isinstance(t, Var):
        return t.name == v
    if isinstance(t, Mul):
        return ((_dominates(t.left, v, env) and _positive(t.right, env))
                or (_dominates(t.right, v, env) and _positive(t.left, env)))
    if type(t) is Add:
        return _dominates(t.left, v, env) or _dominates(t.right, v, env)
    return False


def _positive(t: Term, env) -> bool:
    if isinstance(t, (One, Numeral)):
        return True
    if isinstance(t, Var):
        val = env.get(t.name)
        return type(val) is int and val >= 1
    if isinstance(t, Mul):
        return _positive(t.left, env) and _positive(t.right, env)
    if type(t) is Add:
        return _positive(t.left, env) or _positive(t.right, env)
    return False


def _try_value(t: Term, env):
    try:
        return _tv(t, env)
    except (KeyError, _Abstract):
        return None


class _StepsExhausted(Exception):
    pass


class _Evaluator:
    def __init__(self, witness_bound: int, table=None, hints=None, native_beta: bool = True,
                 solve_enum_limit: int = 256, memo: dict | None = None,
                 step_budget: int | None = None):
        self.wb = witness_bound
        self.steps_left = step_budget
        self.table = table
        self.hints = {k: list(v) for k, v in (hints or {}).items()}
        self.native_beta = native_beta
        self.solve_enum_limit = solve_enum_limit
        self.log: list[tuple[_Frame, int]] = []
        self.uncertain = False
        self.reasons: list[str] = []
        self._beta_cache: dict[int, tuple] = {}
        self._pair_cache: dict[int, bool] = {}
        self._fv_cache: dict[int, tuple] = {}
        self._conj_cache: dict[int, tuple] = {}
        self._conj_vars_cache: dict[int, tuple] = {}
        self.memo: dict = memo if memo is not None else {}

    # ------------------------------------------------------------ helpers

    def note(self, reason: str) -> None:
        if len(self.reasons) < 8 and reason not in self.reasons:
            self.reasons.append(reason)

    def conjuncts(self, f: Formula) -> list[Formula]:
        hit = self._conj_cache.get(id(f))
        if hit is None:
            hit = self._conj_cache[id(f)] = (f, _conjuncts(f))
        return hit[1]

    def conjunct_vars(self, f: Formula) -> list[tuple[Formula, set]]:
        hit = self._conj_vars_cache.get(id(f))
        if hit is None:
            hit = self._conj_vars_cache[id(f)] = (f, [(g, free_vars(g)) for g in _conjuncts(f)])
        return hit[1]

    def beta_of(self, f: Formula):
        if not self.native_beta:
            return None
        key = id(f)
        hit = self._beta_cache.get(key)
        if hit is None:
            hit = (f, match_beta(f))
            self._beta_cache[key] = hit
        return hit[1]

    def rollback(self, mark: int) -> None:
        log = self.log
        while len(log) > mark:
            frame, idx = log.pop()
            del frame.values[idx]

    def frame_pair(self, f: Formula):
        """``(c, d, body)`` if ``f`` is an abstractable ``(Ec)(Ed)body``."""
        if not (self.native_beta and isinstance(f, Exists) and isinstance(f.body, Exists)):
            return None
        c, d, body = f.var, f.body.var, f.body.body
        if c == d:
            return None
        key = id(f)
        ok = self._pair_cache.get(key)
        if ok is None:
            ok = self._pair_cache[key] = (f, self._only_in_beta(body, c, d))
        return (c, d, body) if ok[1] else None

    def _only_in_beta(self, f: Formula, c: str, d: str) -> bool:
        b = self.beta_of(f)
        if b is not None:
            bc, bd, bi, bv = b
            if bc == Var(c) and bd == Var(d):
                return not ((term_vars(bi) | term_vars(bv)) & {c, d})
        if isinstance(f, (Eq, Pred)):
            return not (free_vars(f) & {c, d})
        if isinstance(f, Not):
            return self._only_in_beta(f.f, c, d)
        if isinstance(f, Turnstile):
            return self._only_in_beta(f.body, c, d)
        if isinstance(f, (ForAll, Exists, ExistsUnique)):
            if f.var in (c, d):
                return True
            return self._only_in_beta(f.body, c, d)
        return self._only_in_beta(f.a, c, d) and self._only_in_beta(f.b, c, d)

    # ------------------------------------------------------------ bounds & solving

    def infer_bound(self, f: Formula, v: str, env):
        """An upper bound on ``v`` implied by equations among the conjuncts of ``f``."""
        best = None
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, And):
                stack.extend((g.a, g.b))
            elif isinstance(g, Turnstile):
                stack.append(g.body)
            elif isinstance(g, (Exists, ExistsUnique)) and g.var != v:
                stack.append(g.body)
            elif isinstance(g, Eq):
                for closed, other in ((g.left, g.right), (g.right, g.left)):
                    n = _try_value(closed, env)
                    if n is not None and v not in env and _dominates(other, v, env):
                        best = n if best is None else min(best, n)
        return best

    def solve(self, f: Formula, v: str, env):
        """A finite superset of the values of ``v`` making ``f`` true, or None."""
        t = type(f)
        if t is Eq:
            l = _linear(f.left, v, env)
            if l is None:
                return _NO_INFO
            r = _linear(f.right, v, env)
            if r is None:
                return _NO_INFO
            a, b = l[0] - r[0], r[1] - l[1]
            if a == 0:
                return _NO_INFO if b == 0 else set()
            q, rem = divmod(b, a)
            return {q} if rem == 0 and q >= 0 else set()
        if t is Turnstile:
            return self.solve(f.body, v, env)
        if t is And:
            out = _NO_INFO
            for g in self.conjuncts(f):
                s = self.solve(g, v, env)
                if s is not None:
                    out = s if out is None else out & s
                    if not out:
                        return out
            return out
        if t is Or:
            a = self.solve(f.a, v, env)
            if a is None:
                return _NO_INFO
            b = self.solve(f.b, v, env)
            return None if b is None else a | b
        if t is Exists or t is ExistsUnique:
            if f.var == v:
                return _NO_INFO
            b = self.beta_of(f)
            if b is not None:
                return self._solve_beta(b, v, env)
            pair = self.frame_pair(f) if t is Exists else None
            if pair is not None:
                return self._solve_frame(pair, v, env)
            w = f.var
            ws = self.solve(f.body, w, env)
            saved = env.get(w, _MISSING)
            if ws is None:
                bound = self.infer_bound(f.body, w, env)
                if bound is None or bound > self.solve_enum_limit:
                    # leave w unbound: conjuncts mentioning it give no information
                    env.pop(w, None)
                    try:
                        return self.solve(f.body, v, env)
                    finally:
                        _restore(env, w, saved)
                ws = range(bound + 1)
            out: set[int] = set()
            try:
                for x in ws:
                    env[w] = x
                    s = self.solve(f.body, v, env)
                    if s is None:
                        return _NO_INFO
                    out |= s
            finally:
                _restore(env, w, saved)
            return out
        return _NO_INFO

    def _solve_beta(self, b, v: str, env):
        c, d, i, val = b
        if val != Var(v):
            return _NO_INFO
        if any(v in term_vars(t) for t in (c, d, i)):
            return _NO_INFO
        idx = _try_value(i, env)
        if idx is None:
            return _NO_INFO
        if isinstance(c, Var) and isinstance(env.get(c.name), _Frame):
            frame = env[c.name]
            if idx in frame.values:
                return {frame.values[idx]}
            return _NO_INFO
        cv, dv = _try_value(c, env), _try_value(d, env)
        if cv is None or dv is None:
            return _NO_INFO
        return {beta(cv, dv, idx)}

    def _solve_frame(self, pair, v: str, env):
        c, d, body = pair
        parts = self.conjunct_vars(body)
        # conjuncts over variables left unbound by an enclosing solve are skipped
        rest = [g for g, fv in parts if v not in fv and all(x in env or x in (c, d) for x in fv)]
        tied = [g for g, fv in parts if v in fv]
        frame = _Frame(True)
        saved_c, saved_d = env.get(c, _MISSING), env.get(d, _MISSING)
        env[c] = env[d] = frame
        mark = len(self.log)
        was_uncertain, self.uncertain = self.uncertain, False
        try:
            for g in rest:
                r = self.ev(g, env, True)
                if r is not True:
                    if r is False and not self.uncertain:
                        return set()
                    return _NO_INFO
            if self.uncertain:
                return _NO_INFO
            out = _NO_INFO
            for g in tied:
                s = self.solve(g, v, env)
                if s is not None:
                    out = s if out is None else out & s
            return out
        finally:
            self.rollback(mark)
            self.uncertain = was_uncertain or self.uncertain
            _restore(env, c, saved_c)
            _restore(env, d, saved_d)

    def candidates(self, body: Formula, v: str, env):
        """``(values, complete)`` for a search over ``v``."""
        hinted = self.hints.get(v, [])
        s = self.solve(body, v, env)
        if s is not None:
            return hinted + sorted(s), True
        bound = self.infer_bound(body, v, env)
        if bound is not None and bound <= self.wb:
            return hinted + list(range(bound + 1)), True
        return (hinted + list(range(self.wb + 1)),
                False)

    # ------------------------------------------------------------ evaluation

    def ev(self, f: Formula, env, pol: bool):
        if self.steps_left is not None:
            self.steps_left -= 1
            if self.steps_left < 0:
                raise _StepsExhausted()
        t = type(f)
        if t is Eq:
            try:
                return _tv(f.left, env) == _tv(f.right, env)
            except _Abstract:
                self.note("equation over an abstract sequence code")
                return None
        if t is Turnstile:
            return self.ev(f.body, env, pol)
        if t is Not:
            r = self.ev(f.f, env, not pol)
            return None if r is None else not r
        if t is And:
            a = self.ev(f.a, env, pol)
            if a is False:
                return False
            b = self.ev(f.b, env, pol)
            if b is False:
                return False
            return True if (a and b) else None
        if t is Or:
            mark = len(self.log)
            a = self.ev(f.a, env, pol)
            if a is True:
                if len(self.log) > mark:
                    self.uncertain = True
                return True
            if a is False:
                self.rollback(mark)
            b = self.ev(f.b, env, pol)
            if b is True:
                return True
            return False if (a is False and b is False) else None
        if t is Implies:
            a = self.ev(f.a, env, not pol)
            if a is False:
                return True
            b = self.ev(f.b, env, pol)
            if b is True:
                return True
            return False if (a is True and b is False) else None
        if t is Pred:
            return self.ev_pred(f, env)
        if t is Exists:
            b = self.beta_of(f)
            if b is not None:
                return self.ev_beta(b, env, pol)
            pair = self.frame_pair(f)
            if pair is not None:
                return self.ev_frame(pair, env, pol, f)
            return self.ev_exists(f, env, pol)
        if t is ForAll:
            return self.ev_forall(f, env, pol)
        if t is ExistsUnique:
            return self.ev_unique(f, env, pol)
        raise TypeError(f"not a formula: {f!r}")

    def ev_pred(self, f: Pred, env):
        entry = self.table.predicates.get(f.name) if self.table is not None else None
        if entry is None or entry.evaluator is None:
            raise ValueError(f"defined predicate {f.name!r} has no registered meaning")
        try:
            args = [_tv(a, env) for a in f.args]
        except _Abstract:
            return None
        return bool(entry.evaluator(*args))

    def ev_beta(self, b, env, pol):
        c, d, i, v = b
        try:
            idx, val = _tv(i, env), _tv(v, env)
        except _Abstract:
            return None
        if isinstance(c, Var) and isinstance(env.get(c.name), _Frame):
            frame = env[c.name]
            have = frame.values.get(idx)
            if have is not None:
                return have == val
            if pol == frame.pol:
                frame.values[idx] = val
                self.log.append((frame, idx))
                return True
            self.note("sequence element read in a negative position")
            return None
        try:
            return beta(_tv(c, env), _tv(d, env), idx) == val
        except _Abstract:
            return None

    def ev_frame(self, pair, env, pol, f=None):
        c, d, body = pair
        key = self._frame_key(f, env, pol) if f is not None else None
        if key is not None:
            hit = self.memo.get(key)
            if hit is not None:
                return hit[1]
            # a self-contained pair: outer commitments cannot change its value
            was, self.uncertain = self.uncertain, False
        frame = _Frame(pol)
        saved_c, saved_d = env.get(c, _MISSING), env.get(d, _MISSING)
        env[c] = env[d] = frame
        mark = len(self.log)
        try:
            r = self.ev(body, env, pol)
        finally:
            _restore(env, c, saved_c)
            _restore(env, d, saved_d)
        if r is not True or key is not None:
            self.rollback(mark)
        if r is False and self.uncertain:
            self.note("sequence search committed to one of several choices")
            r = None
        if key is not None:
            self.uncertain = was
            if r is not None:
                self.memo[key] = (f, r)
        return r

    def _frame_key(self, f, env, pol):
        fv = self._fv_cache.get(id(f))
        if fv is None:
            fv = self._fv_cache[id(f)] = (f, tuple(sorted(free_vars(f))))
        vals = []
        for name in fv[1]:
            x = env.get(name)
            if type(x) is not int:
                return None
            vals.append(x)
        return id(f), pol, tuple(vals)

    def ev_exists(self, f, env, pol):
        v, body = f.var, f.body
        values, complete = self.candidates(body, v, env)
        saved = env.get(v, _MISSING)
        unknown = False
        try:
            for k, x in enumerate(values):
                env[v] = x
                mark = len(self.log)
                r = self.ev(body, env, pol)
                if r is True:
                    if len(self.log) > mark and (k + 1 < len(values) or not complete):
                        self.uncertain = True
                    return True
                self.rollback(mark)
                if r is None:
                    unknown = True
        finally:
            _restore(env, v, saved)
        if complete and not unknown:
            return False
        self.note(f"no witness for {v} up to the search bound")
        return None

    def ev_forall(self, f, env, pol):
        v, body = f.var, f.body
        saved = env.get(v, _MISSING)
        unknown = False
        try:
            if isinstance(body, Implies):
                values, complete = self.candidates(body.a, v, env)
                for x in values:
                    env[v] = x
                    r = self.ev(body, env, pol)
                    if r is False:
                        return False
                    if r is None:
                        unknown = True
            else:
                complete = False
                for x in range(self.wb + 1):
                    env[v] = x
                    r = self.ev(body, env, pol)
                    if r is False:
                        return False
                    if r is None:
                        unknown = True
        finally:
            _restore(env, v, saved)
        if complete and not unknown:
            return True
        self.note(f"universal over {v} not decided at this bound")
        return None

    def ev_unique(self, f, env, pol):
        v, body = f.var, f.body
        values, complete = self.candidates(body, v, env)
        saved = env.get(v, _MISSING)
        found: set[int] = set()
        unknown = False
        mark = len(self.log)
        try:
            for x in values:
                if x in found:
                    continue
                env[v] = x
                r = self.ev(body, env, pol)
                if len(self.log) > mark:
                    self.rollback(mark)
                    self.note("unique existential over an abstract sequence")
                    return None
                if r is True:
                    found.add(x)
                    if len(found) > 1:
                        return False
                elif r is None:
                    unknown = True
        finally:
            _restore(env, v, saved)
        if complete and not unknown:
            return len(found) == 1
        self.note(f"uniqueness of {v} not decided at this bound")
        return None


_MISSING = object()


def _restore(env, name, saved):
    if saved is _MISSING:
        env.pop(name, None)
    else:
        env[name] = saved


def _conjuncts(f: Formula) -> list[Formula]:
    out, stack = [], [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.b)
            stack.append(g.a)
        elif isinstance(g, Turnstile) and isinstance(g.body, And):
            stack.append(g.body)
        else:
            out.append(g)
    return out


def eval_closed(f: Formula, witness_bound: int = 1000, table=None,
                hints: Mapping[str, Iterable[int]] | None = None,
                native_beta: bool = True, env: Mapping[str, int] | None = None,
                memo: dict | None = None, step_budget: int | None = None) -> TruthVerdict:
    """Truth value of a closed formula, or Unknown when the finite search runs out.

    ``hints`` maps bound variable names to extra witness candidates tried
    first; they never make an answer less sound.  ``native_beta=False``
    evaluates sequence-element subformulas by plain search, without the
    sequence abstraction.

    ``env`` gives values to free variables, so an open formula can be
    evaluated at many points without rebuilding it; ``memo`` (a dict owned by
    the caller) then carries results for self-contained sequence-code pairs
    from one call to the next.  A memo must only be shared between calls on
    one live formula object; it stores only definite answers, which do not
    depend on the bound.

    ``step_budget`` caps the number of subformula evaluations; running out
    gives Unknown.
    """
    env = dict(env or {})
    missing = free_vars(f) - set(env)
    if missing:
        raise FreeVariableError(f"formula has free variables {sorted(missing)}")
    ev = _Evaluator(witness_bound, table, hints, native_beta, memo=memo, step_budget=step_budget)
    try:
        r = ev.ev(f, env, True)
    except _StepsExhausted:
        return TruthVerdict(None, f"step budget of {step_budget} evaluations exhausted")
    if r is None:
        return TruthVerdict(None, "; ".join(ev.reasons) or "search bound exhausted")
    return TRUE if r else FALSE
