"""The diagonal sentence GUS and a bounded report on it.

Q is a defined predicate backed by the procedure q, so GUS mentions Q by
name instead of carrying its expanded arithmetic formula.  The report only
records what finite evaluation shows; it makes no claim about provability
in general.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .codec import CodecError, SymbolTable, decode_formula, encode_formula
from .kernel import SYSTEMS, get_system
from .provability import build_q
from .semantics import eval_closed, eval_term
from .syntax import Formula, free_vars, numeral, parse, print_formula, substitute

__all__ = [
    "DiagonalResult", "CaseReport", "register_Q", "diagonalize", "gus_case_report",
    "NOT_DECIDED", "PRE_IMAGES",
]

NOT_DECIDED = "not decided at this bound"

PRE_IMAGES = {
    "PP": "(Ay)|=PP(~Q(x,y))",
    "PP+": "(Ay)|=PP(~Q(x,y))",
    "PA": "(Ay)(~Q(x,y))",
}

ABBREVIATION_NOTE = (
    "Q is a defined predicate evaluated by the procedure q; GUS uses it as an "
    "abbreviation, not as its expanded arithmetic formula."
)


def register_Q(system, table: SymbolTable) -> str:
    """Register ``Q`` so that ``Q(k, m)`` evaluates to ``q(k, m) == 1``."""
    q = build_q(system, table)
    meaning = lambda k, m: q(k, m) == 1  # noqa: E731
    entry = table.predicates.get("Q")
    if entry is None:
        table.register("Q", 2, evaluator=meaning)
    elif entry.evaluator is None:
        # a table read from file knows the name and code but not the meaning
        table.attach("Q", 2, meaning)
    else:
        raise CodecError("predicate 'Q' already registered")
    return "Q"


@dataclass(frozen=True)
class DiagonalResult:
    system: str
    pre_image: Formula
    p: int
    gus: Formula
    table: SymbolTable = field(repr=False, compare=False)

    def invariant_failures(self) -> list[str]:
        out = []
        try:
            back = decode_formula(self.p, self.table)
        except CodecError as e:
            back = None
            out.append(f"p does not decode: {e}")
        if back is not None and back != self.pre_image:
            out.append("decode_formula(p) differs from the pre-image")
        if free_vars(self.pre_image) != {"x"}:
            out.append("pre-image must have exactly the free variable x")
        if self.gus != substitute(self.pre_image, "x", numeral(self.p)):
            out.append("gus is not the pre-image with numeral(p) substituted")
        if free_vars(self.gus):
            out.append("gus has free variables")
        if eval_term(numeral(self.p)) != self.p:
            out.append("numeral(p) does not evaluate to p")
        return out

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "pre_image": print_formula(self.pre_image),
            "p": str(self.p),
            "p_digits": len(str(self.p)),
            "gus": print_formula(self.gus, compact=True),
            "invariant_failures": self.invariant_failures(),
        }


def diagonalize(system, table: SymbolTable) -> DiagonalResult:
    system = get_system(system)
    if "Q" not in table.predicates:
        raise CodecError("predicate 'Q' is not registered")
    pre = parse(PRE_IMAGES[system.name], table)
    p = encode_formula(pre, table)
    return DiagonalResult(system.name, pre, p, substitute(pre, "x", numeral(p)), table)


@dataclass
class CaseReport:
    system: str
    sample_bound: int
    sampled: int
    hits: list[int]
    ppr3: dict[str, str]
    gus_eval: str
    undecidability: dict[str, str]
    notes: list[str]

    @property
    def proof_found(self) -> bool:
        return bool(self.hits)

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "sample_bound": self.sample_bound,
            "sampled": self.sampled,
            "q_hits": self.hits,
            "proof_of_gus_found": self.proof_found,
            "ppr3": self.ppr3,
            "gus_evaluation": self.gus_eval,
            "undecidability": self.undecidability,
            "notes": self.notes,
        }


def gus_case_report(result: DiagonalResult, sample_bound: int) -> CaseReport:
    q = build_q(result.system, result.table)
    hits = [r for r in range(sample_bound + 1) if q(result.p, r) == 1]
    ppr3 = {name: ("enabled" if cfg.enables("PPR3") else "disabled")
            for name, cfg in SYSTEMS.items()}
    verdict = eval_closed(result.gus, witness_bound=sample_bound, table=result.table)
    gus_eval = {True: "true", False: "false"}.get(verdict.value, f"unknown ({verdict.reason})")
    notes = [ABBREVIATION_NOTE]
    if hits:
        notes.append(f"q(p, r) = 1 at r = {hits}: these r code kernel-accepted proofs of gus")
    else:
        notes.append(f"no r <= {sample_bound} codes a kernel-accepted proof of gus")
    notes.append("a proof code of gus contains the code of gus as an exponent, so any "
                 "such r exceeds 2^p; a small sample bound cannot meet one")
    if ppr3.get(result.system) == "enabled":
        notes.append("the final step from a Num pattern to its universal form is licensed "
                     "by PPR3 in this system")
    return CaseReport(result.system, sample_bound, sample_bound + 1, hits, ppr3, gus_eval,
                      {"gus": NOT_DECIDED, "not_gus": NOT_DECIDED}, notes)
