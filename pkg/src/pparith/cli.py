"""Command-line entry point: ``pparith <command> [options]``.

Every command prints one report, JSON by default.  Settings come from flags,
then ``PPARITH_*`` environment variables, then built-in defaults.

Exit codes: 0 success, 1 semantic rejection, 2 parse error, 3 codec error,
4 invariant violation, 5 undetermined.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from .codec import CodecError, ProofCode, SymbolTable, decode_formula, decode_proof, encode_formula, encode_proof
from .derive import DEFAULT_NUMERAL_CAP, MAX_SEARCH_DEPTH, SearchLimitExceeded, search
from .diagonal import diagonalize, gus_case_report, register_Q
from .kernel import KernelError, check, get_system, normalize, parse_proof
from .primrec import evaluate, library
from .representation import SizeExceeded, represent, verify_representation
from .syntax import (
    Add, Eq, ForAll, One, ParseError, Var, Zero, free_vars, is_pp_wff, is_proposition, parse,
    print_formula,
)

EXIT_OK, EXIT_REJECTED, EXIT_PARSE, EXIT_CODEC, EXIT_INVARIANT, EXIT_UNDETERMINED = range(6)

ENV_PREFIX = "PPARITH_"


@dataclass(frozen=True)
class Setting:
    default: object
    kind: type
    maximum: int | None = None


SETTINGS = {
    "system": Setting("PP", str),
    "table": Setting(None, str),
    "depth": Setting(2, int, MAX_SEARCH_DEPTH),
    "numeral_cap": Setting(DEFAULT_NUMERAL_CAP, int, 10),
    "witness_bound": Setting(None, int, 1 << 20),
    "step_budget": Setting(2_000_000, int, 10**9),
    "sample_bound": Setting(10_000, int, 100_000),
    "format": Setting("json", str),
    "seed": Setting(0, int),
    "figures": Setting(None, str),
}


@dataclass(frozen=True)
class RunConfig:
    system: str
    table: str | None
    depth: int
    numeral_cap: int
    witness_bound: int | None
    step_budget: int
    sample_bound: int
    format: str
    seed: int
    figures: str | None


class ConfigError(ValueError):
    pass


def resolve_config(ns: argparse.Namespace, environ=os.environ) -> RunConfig:
    values = {}
    for name, s in SETTINGS.items():
        v = getattr(ns, name, None)
        if v is None:
            raw = environ.get(ENV_PREFIX + name.upper())
            if raw is not None and raw != "":
                try:
                    v = s.kind(raw)
                except ValueError:
                    raise ConfigError(f"{ENV_PREFIX}{name.upper()}={raw!r} is not a valid {s.kind.__name__}")
        if v is None:
            v = s.default
        if s.kind is int and v is not None:
            if v < 0 or (s.maximum is not None and v > s.maximum):
                raise ConfigError(f"{name}={v} outside 0..{s.maximum}")
        values[name] = v
    try:
        values["system"] = get_system(values["system"]).name
    except KernelError as e:
        raise ConfigError(str(e))
    if values["format"] not in ("json", "markdown"):
        raise ConfigError(f"format must be json or markdown, not {values['format']!r}")
    return RunConfig(**values)


def load_table(cfg: RunConfig) -> SymbolTable:
    """The configured table (or a fresh one) with Q given its meaning."""
    table = SymbolTable.load(cfg.table) if cfg.table else SymbolTable()
    register_Q(cfg.system, table)
    return table


class CommandFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_input(arg: str) -> str:
    """File contents if ``arg`` names a file, else ``arg`` itself."""
    try:
        is_file = Path(arg).is_file()
    except OSError:  # e.g. a long literal code is not a valid file name
        is_file = False
    return Path(arg).read_text() if is_file else arg


def _formula_lines(text: str) -> list[str]:
    return [s.strip() for s in text.splitlines() if s.strip() and not s.strip().startswith("#")]


# ---------------------------------------------------------------- commands

def cmd_parse(args, cfg: RunConfig):
    table = load_table(cfg)
    items = []
    for src in _formula_lines(_read_input(args.input)):
        f = parse(src, table)
        items.append({
            "input": src,
            "canonical": print_formula(f, compact=True),
            "wff": True,
            "pp_wff": is_pp_wff(f),
            "proposition": is_proposition(f),
            "free_vars": sorted(free_vars(f)),
        })
    if not items:
        raise CommandFailure(EXIT_PARSE, "no formula given")
    return {"formulas": items}, [], EXIT_OK


def cmd_encode(args, cfg: RunConfig):
    table = load_table(cfg)
    text = _read_input(args.input)
    if args.proof:
        proof = parse_proof(text, cfg.system, table)
        code = encode_proof(proof, table)
        try:
            digits = code.to_text()
        except OverflowError as e:
            raise CommandFailure(EXIT_CODEC, str(e))
        return {"kind": "proof", "lines": len(proof.lines), "code": digits}, [], EXIT_OK
    items = []
    for src in _formula_lines(text):
        f = parse(src, table)
        items.append({"formula": print_formula(f, compact=True), "code": str(encode_formula(f, table))})
    if not items:
        raise CommandFailure(EXIT_PARSE, "no formula given")
    return {"kind": "formula", "formulas": items}, [], EXIT_OK


def cmd_decode(args, cfg: RunConfig):
    table = load_table(cfg)
    raw = _read_input(args.input).strip()
    try:
        if args.proof or "." in raw:
            formulas = decode_proof(ProofCode.from_text(raw), table)
            return {"kind": "proof", "lines": [print_formula(f, compact=True) for f in formulas]}, [], EXIT_OK
        f = decode_formula(int(raw), table)
    except ValueError as e:
        if isinstance(e, CodecError):
            raise
        raise CommandFailure(EXIT_CODEC, f"not a decimal code: {raw[:40]!r}")
    return {"kind": "formula", "formula": print_formula(f, compact=True)}, [], EXIT_OK


def cmd_check_proof(args, cfg: RunConfig):
    table = load_table(cfg)
    proof = parse_proof(_read_input(args.input), cfg.system, table)
    verdict = check(proof)
    diags = [{"line": d.index, "status": d.status, "reason": d.reason} for d in verdict.diagnostics]
    result = {
        "accepted": verdict.accepted,
        "lines": len(proof.lines),
        "conclusion": print_formula(proof.conclusion, compact=True),
    }
    return result, diags, EXIT_OK if verdict.accepted else EXIT_REJECTED


EFFECTIVENESS = {
    "semantic_effectiveness": (
        "Whether the axioms and rules of a language suffice to assign a unique formal "
        "truth value to every well-formed proposition. A bounded search cannot settle "
        "this; the sets above show only what each rule set reaches within the bounds."
    ),
    "syntactic_effectiveness": (
        "Whether the axioms and rules further suffice to determine constructively that "
        "every formally true proposition is provable. Formulas present in one set and "
        "absent from another mark where the rule sets differ at this depth."
    ),
}


def random_seeds(seed: int, count: int = 2) -> list:
    """Open equations between small terms in x and y, drawn from ``seed``."""
    rng = random.Random(seed)
    atoms = [Var("x"), Var("y"), Zero(), Add(Zero(), One())]

    def term(depth):
        if depth == 0 or rng.random() < 0.4:
            return rng.choice(atoms)
        return Add(term(depth - 1), rng.choice(atoms))
    return [Eq(term(2), term(2)) for _ in range(count)]


def cmd_diff_systems(args, cfg: RunConfig):
    table = load_table(cfg)
    if args.seeds:
        seeds = [parse(s, table) for s in _formula_lines(_read_input(args.seeds))]
        seed_source = "file"
    else:
        seeds = random_seeds(cfg.seed)
        seed_source = f"random (seed {cfg.seed})"
    sizes = {name: [] for name in ("PP", "PP+", "PA")}
    derived = {}
    for name in sizes:
        for d in range(cfg.depth + 1):
            derived[name] = search(name, seeds, d, cfg.numeral_cap)
            sizes[name].append(len(derived[name]))
    pp, ppp, pa = (set(derived[n]) for n in ("PP", "PP+", "PA"))
    pp_norm = {normalize(f) for f in pp}
    generalized = sorted(
        (f for f in pa if isinstance(f, ForAll) and normalize(f) not in pp_norm),
        key=lambda f: (len(print_formula(f, compact=True)), print_formula(f, compact=True)))
    result = {
        "seeds": [print_formula(s, compact=True) for s in seeds],
        "seed_source": seed_source,
        "sizes_by_depth": sizes,
        "pp_subset_of_pp_plus": pp <= ppp,
        "pp_plus_only": sorted(print_formula(f, compact=True) for f in ppp - pp),
        "pa_generalized_not_in_pp": [print_formula(f, compact=True) for f in generalized],
        **EFFECTIVENESS,
    }
    diags = []
    if cfg.figures:
        result["figures"] = [_plot_sizes(sizes, Path(cfg.figures))]
    code = EXIT_OK if pp <= ppp else EXIT_INVARIANT
    if code:
        diags.append({"item": "monotonicity", "status": "FAIL", "reason": "PP set not contained in PP+ set"})
    return result, diags, code


def _plot_sizes(sizes: dict, outdir: Path) -> str:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for (name, ys), marker in zip(sizes.items(), "osd"):
        ax.plot(range(len(ys)), ys, marker=marker, label=name)
    ax.set_xlabel("search depth")
    ax.set_ylabel("derived formulas")
    ax.set_xticks(range(len(next(iter(sizes.values())))))
    ax.legend(frameon=False)
    fig.tight_layout()
    path = outdir / "diff_systems_sizes.png"
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return str(path)


def cmd_build_gus(args, cfg: RunConfig):
    table = load_table(cfg)
    result = diagonalize(cfg.system, table)
    report = gus_case_report(result, cfg.sample_bound)
    failures = result.invariant_failures()
    diags = [{"item": "invariant", "status": "FAIL", "reason": r} for r in failures]
    if report.proof_found:
        diags.append({"item": "sample", "status": "ALERT",
                      "reason": f"kernel-accepted proofs of gus at r = {report.hits}"})
    payload = {"diagonal": result.to_dict(), "case_report": report.to_dict()}
    return payload, diags, EXIT_INVARIANT if failures else EXIT_OK


def cmd_verify_representation(args, cfg: RunConfig):
    fns = library()
    if args.function not in fns:
        raise CommandFailure(EXIT_PARSE, f"unknown function {args.function!r}; known: {', '.join(sorted(fns))}")
    f = fns[args.function]
    values = [int(a) for a in args.args]
    if len(values) != f.arity:
        raise CommandFailure(EXIT_PARSE, f"{args.function} takes {f.arity} arguments")
    m = args.expected if args.expected is not None else evaluate(f, values)
    try:
        r = represent(f)
    except SizeExceeded as e:
        raise CommandFailure(EXIT_UNDETERMINED, str(e))
    v = verify_representation(r, values, m, bound=cfg.witness_bound, system=cfg.system,
                              step_budget=cfg.step_budget)
    result = {"function": args.function, "args": values, "m": m, **v.to_dict()}
    if v.condition == "Undetermined":
        code = EXIT_UNDETERMINED
    else:
        code = EXIT_OK if v.matches else EXIT_REJECTED
    return result, [], code


COMMANDS = {
    "parse": cmd_parse,
    "encode": cmd_encode,
    "decode": cmd_decode,
    "check-proof": cmd_check_proof,
    "diff-systems": cmd_diff_systems,
    "build-gus": cmd_build_gus,
    "verify-representation": cmd_verify_representation,
}


# ---------------------------------------------------------------- plumbing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--system", type=str.upper, choices=["PP", "PP+", "PA"])
    common.add_argument("--table", help="symbol table file")
    common.add_argument("--depth", type=int)
    common.add_argument("--numeral-cap", type=int, dest="numeral_cap")
    common.add_argument("--witness-bound", type=int, dest="witness_bound")
    common.add_argument("--step-budget", type=int, dest="step_budget",
                        help="evaluation steps before a representation check gives up")
    common.add_argument("--sample-bound", type=int, dest="sample_bound")
    common.add_argument("--format", choices=["json", "markdown"])
    common.add_argument("--seed", type=int)
    common.add_argument("--figures", help="directory for PNG figures (diff-systems)")

    p = argparse.ArgumentParser(prog="pparith", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("parse", parents=[common], help="parse and analyse formulas")
    sp.add_argument("input", help="formula text or a file with one formula per line")
    sp = sub.add_parser("encode", parents=[common], help="Gödel number of formulas or a proof")
    sp.add_argument("input")
    sp.add_argument("--proof", action="store_true", help="input is a proof file")
    sp = sub.add_parser("decode", parents=[common], help="formula or proof from its code")
    sp.add_argument("input", help="decimal code, or dot-separated exponents for a proof")
    sp.add_argument("--proof", action="store_true")
    sp = sub.add_parser("check-proof", parents=[common], help="check a proof file")
    sp.add_argument("input")
    sp = sub.add_parser("diff-systems", parents=[common], help="compare PP, PP+ and PA derived sets")
    sp.add_argument("seeds", nargs="?", help="file with one seed formula per line")
    sub.add_parser("build-gus", parents=[common], help="diagonal sentence and case report")
    sp = sub.add_parser("verify-representation", parents=[common],
                        help="check a representing formula at one point")
    sp.add_argument("function")
    sp.add_argument("args", nargs="+")
    sp.add_argument("--expected", type=int, help="claimed value m (default: the true value)")
    return p


def render_markdown(report: dict) -> str:
    out = [f"# pparith {report['command']['command']}", ""]

    def walk(obj, indent):
        pad = "  " * indent
        if isinstance(obj, dict):
            for k, v in obj.items():
                if isinstance(v, (dict, list)) and v:
                    out.append(f"{pad}- **{k}**:")
                    walk(v, indent + 1)
                else:
                    out.append(f"{pad}- **{k}**: `{json.dumps(v, ensure_ascii=False)}`")
        else:
            for v in obj:
                if isinstance(v, (dict, list)):
                    out.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    out.append(f"{pad}- `{v}`")

    for section in ("config", "results", "diagnostics"):
        out += [f"## {section}", ""]
        walk(report[section], 0)
        out.append("")
    out.append(f"exit code {report['exit_code']}, {report['duration_s']:.3f} s")
    return "\n".join(out) + "\n"


def run(argv=None, environ=os.environ) -> tuple[int, str]:
    """Run one command; returns the exit code and the rendered report."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    start = time.perf_counter()
    echo = {k: v for k, v in vars(ns).items() if k not in SETTINGS}
    try:
        cfg = resolve_config(ns, environ)
    except ConfigError as e:
        parser.error(str(e))
    try:
        results, diags, code = COMMANDS[ns.command](ns, cfg)
    except CommandFailure as e:
        results, diags, code = {}, [{"status": "ERROR", "reason": str(e)}], e.code
    except (ParseError, KernelError) as e:
        results, diags, code = {}, [{"status": "ERROR", "reason": str(e)}], EXIT_PARSE
        if isinstance(e, SearchLimitExceeded):
            code = EXIT_UNDETERMINED
    except CodecError as e:
        results, diags, code = {}, [{"status": "ERROR", "reason": str(e)}], EXIT_CODEC
    except OSError as e:
        results, diags, code = {}, [{"status": "ERROR", "reason": str(e)}], EXIT_PARSE
    report = {
        "command": echo,
        "config": asdict(cfg),
        "results": results,
        "diagnostics": diags,
        "exit_code": code,
        "duration_s": round(time.perf_counter() - start, 6),
    }
    if cfg.format == "markdown":
        return code, render_markdown(report)
    return code, json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
