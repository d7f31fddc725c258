"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import itertools
import json
import math
import random
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from pparith import cli
from pparith.codec import SymbolTable, decode_formula, encode_formula, encode_proof
from pparith.corpus import hand_proofs, mutate_formulas, proof_corpus, random_formula
from pparith.derive import search
from pparith.diagonal import diagonalize, register_Q
from pparith.kernel import Proof, check, check_formulas, get_system, format_proof
from pparith.primrec import evaluate, library
from pparith.provability import build_prf, build_q
from pparith.representation import find_beta_code, represent, verify_representation
from pparith.semantics import beta, beta_formula, eval_closed, eval_term
from pparith.syntax import free_vars, numeral, strip_turnstiles, substitute_many

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[n] = line
    print(line)
    assert ok, line


# 1 ---------------------------------------------------------------- codec

def test_criterion_1_codec_round_trip():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    table = SymbolTable()
    good = 0
    for _ in range(1000):
        f = random_formula(rng, 6)
        good += decode_formula(encode_formula(f, table), table) == f
    dt = time.perf_counter() - t0
    record(1, good == 1000 and dt < 10, f"{good}/1000 round trips, {dt:.2f} s, limit 10 s")


# 2 ---------------------------------------------------------------- prim-rec oracles

def _sieve(n):
    flags = [False, False] + [True] * (n - 1)
    for p in range(2, int(n ** 0.5) + 1):
        if flags[p]:
            flags[p * p::p] = [False] * len(flags[p * p::p])
    return flags


def test_criterion_2_primrec_oracles():
    lib = library()
    bad = []
    bad += [("factorial", n) for n in range(11) if evaluate(lib["factorial"], [n]) != math.factorial(n)]
    bad += [("exponential", b, e) for b in range(9) for e in range(9)
            if evaluate(lib["exponential"], [b, e]) != b ** e]
    bad += [("quotient", m, n) for m in range(101) for n in range(1, 101)
            if evaluate(lib["quotient"], [m, n]) != m // n]
    sieve = _sieve(1000)
    bad += [("is_prime", n) for n in range(1001) if evaluate(lib["is_prime"], [n]) != int(sieve[n])]
    checked = 11 + 81 + 101 * 100 + 1001
    record(2, not bad, f"{checked} evaluations, {len(bad)} mismatches{'' if not bad else ': ' + str(bad[:3])}")


# 3 ---------------------------------------------------------------- prf vs kernel

def test_criterion_3_prf_kernel_agreement():
    table = SymbolTable()
    prfs = {s: build_prf(s, table) for s in ("PP", "PP+", "PA")}
    proofs = proof_corpus(seed=3, count=20, table=table)
    rng = random.Random(33)
    cases = []
    for p in proofs:
        cases.append((p.system, p.formulas, check(p).accepted))
        for _ in range(50):
            mutated, _label = mutate_formulas(p.formulas, rng, table)
            kernel = check_formulas(mutated, p.system).accepted
            if not kernel:
                break
        cases.append((p.system, mutated, kernel))
    agree = 0
    for system, formulas, kernel in cases:
        k = encode_proof(formulas, table)
        agree += prfs[system.name](k, k.exponents[-1]) == int(kernel)
    valid = sum(1 for c in cases if c[2])
    record(3, agree == 40 and len(cases) == 40 and valid == 20,
           f"{agree}/{len(cases)} agree; {valid} kernel-valid, {len(cases) - valid} corrupted")


# 4 ---------------------------------------------------------------- representation

DEADLINE_4 = 120.0


def _tuples_4():
    yield "successor", [(a,) for a in range(720)]
    yield "factorial", [(n,) for n in range(7)]
    # 0*b = 0 for every b, so arguments are capped at 720 to keep the set finite
    mul = [(a, b) for a in range(721) for b in range(721) if a * b <= 720]
    yield "multiplication", sorted(mul, key=lambda t: (t[0] * t[1], t))
    add = [(a, b) for a in range(721) for b in range(721 - a)]
    yield "addition", sorted(add, key=lambda t: (t[0] + t[1], t))


def test_criterion_4_representation_conditions():
    lib = library()
    t0 = time.perf_counter()
    total = covered = 0
    opposite = undetermined = semantic_fail = syntactic_fail = syntactic_ok = 0
    per_fn = {}
    timed_out = False
    for name, tuples in _tuples_4():
        r = represent(lib[name])
        done = 0
        total += len(tuples)
        for args in tuples:
            if time.perf_counter() - t0 > DEADLINE_4:
                timed_out = True
                break
            value = evaluate(r.source, list(args))
            for m in (value, value + 1):
                v = verify_representation(r, list(args), m)
                if v.condition == "Undetermined":
                    undetermined += 1
                elif not v.matches:
                    opposite += 1
                if v.semantic is not True:
                    semantic_fail += 1
                if v.syntactic is not None:
                    syntactic_ok += v.syntactic is True
                    syntactic_fail += v.syntactic is not True
            done += 1
        covered += done
        per_fn[name] = f"{done}/{len(tuples)}"
    dt = time.perf_counter() - t0
    ok = (not timed_out and covered == total and opposite == 0 and undetermined == 0
          and semantic_fail == 0 and syntactic_fail == 0 and dt < DEADLINE_4)
    coverage = ", ".join(f"{k} {v}" for k, v in per_fn.items())
    record(4, ok,
           f"{covered}/{total} tuples in {dt:.1f} s (limit {DEADLINE_4:.0f} s): {coverage}; "
           f"opposite {opposite}, undetermined {undetermined}, semantic failures {semantic_fail}, "
           f"kernel proofs {syntactic_ok} ok / {syntactic_fail} failed"
           + ("; stopped at the deadline" if timed_out else ""))


# 5 ---------------------------------------------------------------- beta

def test_criterion_5_beta_adequacy():
    recovered = total = 0
    for n in range(1, 5):
        for seq in itertools.product(range(7), repeat=n):
            total += 1
            found = find_beta_code(seq)
            if found and [beta(*found, i) for i in range(n)] == list(seq):
                recovered += 1
    # the CRT solver returns the least c for its d; confirm by brute force on short sequences
    minimal = all(
        min(c for c in range(10**4) if all(beta(c, find_beta_code(s)[1], i) == x for i, x in enumerate(s)))
        == find_beta_code(s)[0]
        for s in itertools.product(range(7), repeat=2))
    rng = random.Random(55)
    agree = 0
    for _ in range(200):
        c, d, i = rng.randrange(300), rng.randrange(12), rng.randrange(6)
        v = beta(c, d, i) if rng.random() < 0.5 else rng.randrange(10)
        inst = substitute_many(beta_formula(), {k: numeral(x) for k, x in zip("cdiv", (c, d, i, v))})
        agree += eval_closed(inst, native_beta=False).value == (beta(c, d, i) == v)
    record(5, recovered == total and agree == 200 and minimal,
           f"{recovered}/{total} sequences recovered, least c confirmed: {minimal}, "
           f"{agree}/200 formula instances agree")


# 6 ---------------------------------------------------------------- diagonal

def test_criterion_6_diagonal_fixed_point():
    details, ok = [], True
    ps = {}
    for system in ("PP", "PA"):
        runs = []
        for _ in range(2):
            table = SymbolTable()
            register_Q(system, table)
            runs.append(diagonalize(system, table))
        r = runs[0]
        fails = r.invariant_failures()
        stable = runs[0].p == runs[1].p
        decoded = decode_formula(r.p, r.table) == r.pre_image
        closed = not free_vars(r.gus)
        numeral_ok = eval_term(numeral(r.p)) == r.p
        q = build_q(system, r.table)
        hits = [k for k in range(10**4 + 1) if q(r.p, k) == 1]
        ok &= not fails and stable and decoded and closed and numeral_ok and not hits
        ps[system] = len(str(r.p))
        details.append(f"{system}: p has {len(str(r.p))} digits, decode exact {decoded}, gus closed {closed}, "
                       f"numeral(p)=p {numeral_ok}, stable {stable}, q hits up to 10^4: {len(hits)}")
    record(6, ok, "; ".join(details))


# 7 ---------------------------------------------------------------- rule sets

def test_criterion_7_rule_set_behaviour():
    hp = hand_proofs()
    gen = hp["pa-generalisation"]
    gen_ok = (check(gen).accepted
              and not check(Proof(gen.lines, get_system("PP"))).accepted
              and not check(Proof(gen.lines, get_system("PP+"))).accepted)
    pat = hp["pp-plus-numeral-pattern"]
    pat_ok = (check(pat).accepted
              and not check(Proof(pat.lines, get_system("PP"))).accepted
              and not check(Proof(pat.lines, get_system("PA"))).accepted)
    mono = True
    for seed in (0, 1, 2):
        seeds = cli.random_seeds(seed)
        for d in range(5):
            mono &= set(search("PP", seeds, d)) <= set(search("PP+", seeds, d))
    record(7, gen_ok and pat_ok and mono,
           f"GPR3 PA-only {gen_ok}, PPR3 PP+-only {pat_ok}, PP subset of PP+ at depth 0..4 on 3 seeds {mono}")


# 8 ---------------------------------------------------------------- soundness

def test_criterion_8_checker_soundness():
    proofs = []
    for seed in range(5):
        proofs += proof_corpus(seed=100 + seed, count=30)
    accepted = [p for p in proofs if p.system.is_pp and check(p).accepted]
    decided = true = false = 0
    for p in accepted:
        v = eval_closed(strip_turnstiles(p.conclusion), witness_bound=1000)
        if v.value is not None:
            decided += 1
            true += v.value
            false += not v.value
    record(8, false == 0,
           f"{len(accepted)} accepted PP/PP+ proofs, {decided} decided at bound 1000, "
           f"{true} true, {false} true-claimed-false")


# 9 ---------------------------------------------------------------- CLI

def _strip(text: str) -> str:
    data = json.loads(text)
    data.pop("duration_s")
    return json.dumps(data, sort_keys=True)


def test_criterion_9_cli_determinism(tmp_path, monkeypatch):
    hp = hand_proofs()
    files = {}
    for name in ("pp3-axiom", "pa-generalisation", "pa-induction"):
        files[name] = tmp_path / f"{name}.proof"
        files[name].write_text(format_proof(hp[name]))
    seeds = tmp_path / "seeds.txt"
    seeds.write_text("((x+0)=x)\n")
    _, enc = cli.run(["encode", "((x+0)=x)"], environ={})
    code_x = json.loads(enc)["results"]["formulas"][0]["code"]
    _, penc = cli.run(["encode", str(files["pa-induction"]), "--proof", "--system", "pa"], environ={})
    proof_code = json.loads(penc)["results"]["code"]
    commands = {
        "parse": (["parse", "(Ax)|=PP((x+0)=x)"], 0),
        "parse-error": (["parse", "((0="], 2),
        "encode": (["encode", "(Ay)|=PP(~Q(x,y))"], 0),
        "decode": (["decode", code_x], 0),
        "decode-proof": (["decode", proof_code], 0),
        "decode-not-a-code": (["decode", "10"], 3),
        "check-proof": (["check-proof", str(files["pp3-axiom"])], 0),
        "check-proof-pa": (["check-proof", str(files["pa-generalisation"]), "--system", "pa"], 0),
        "check-proof-rejected": (["check-proof", str(files["pa-generalisation"]), "--system", "pp"], 1),
        "diff-systems": (["diff-systems", str(seeds), "--depth", "2"], 0),
        "build-gus": (["build-gus", "--sample-bound", "1000"], 0),
        "verify-representation": (["verify-representation", "factorial", "3"], 0),
        "verify-mismatch": (["verify-representation", "factorial", "3", "--expected", "7"], 0),
        "verify-undetermined": (["verify-representation", "is_prime", "7", "--step-budget", "20000"], 5),
        "markdown": (["parse", "(0=0)", "--format", "markdown"], 0),
    }
    identical, codes_ok, seen = 0, 0, set()
    for name, (argv, want) in commands.items():
        c1, t1 = cli.run(argv, environ={})
        c2, t2 = cli.run(argv, environ={})
        if argv[-1] == "markdown":
            same = t1.rsplit("\n", 2)[0] == t2.rsplit("\n", 2)[0]
        else:
            same = _strip(t1) == _strip(t2)
        identical += same
        codes_ok += c1 == want == c2
        seen.add(c1)
    # a semantic rejection from the representation check and an invariant
    # violation cannot arise from correct inputs, so they are forced here
    from pparith.diagonal import DiagonalResult
    from pparith.representation import RepresentationVerdict
    monkeypatch.setattr(cli, "verify_representation",
                        lambda *a, **k: RepresentationVerdict("ConditionII", "ConditionI", 6, False, None))
    forced_1 = cli.run(["verify-representation", "factorial", "3"], environ={})[0]
    monkeypatch.undo()
    monkeypatch.setattr(DiagonalResult, "invariant_failures", lambda self: ["forced"])
    forced_4 = cli.run(["build-gus", "--sample-bound", "10"], environ={})[0]
    seen |= {forced_1, forced_4}
    n = len(commands)
    ok = identical == n and codes_ok == n and forced_1 == 1 and forced_4 == 4 and seen == set(range(6))
    record(9, ok, f"{identical}/{n} reports identical across runs, {codes_ok}/{n} exit codes as expected, "
                  f"exit codes seen {sorted(seen)} (1 and 4 also forced by stubs)")


if __name__ == "__main__":
    import pytest
    sys.exit(pytest.main([__file__, "-q", "-s"]))
