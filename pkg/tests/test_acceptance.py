"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The generated corpora are built once per session and shared, so the
validator criterion sees exactly the normal forms the other criteria made.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import conftest
import laws
from nbe import pipeline
from nbe.cli import main as cli_main
from nbe.errors import DomainTooLarge, InvalidNormalForm
from nbe.oracle.axioms import SCHEMAS, gen_axiom_instance
from nbe.oracle.finite import oracle_equiv
from nbe.oracle.generate import gen_term
from nbe.stlc import syntax as s
from nbe.stlc.nbe import norm as stlc_norm

CALCULI = ("stlc", "cbpv", "polarized")
GOLDEN = Path(__file__).resolve().parent.parent / "golden"

AXIOM_SEEDS = 100
IDEM_TERMS, ORACLE_TERMS, MONAD_TERMS, ROUNDTRIP_TERMS = 500, 300, 500, 500
TERM_SIZE, TYPE_DEPTH = 30, 3
FUZZ_INPUTS = 10_000


def record(key: int, ok: bool, detail: str) -> None:
    conftest.ACCEPTANCE[key] = (ok, detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


# -- shared corpora -----------------------------------------------------------------


@dataclass
class Sample:
    ctx: tuple
    term: object
    ty: object
    nf: object
    nf_again: object
    seconds: float  # slower of the two normalizations


@lru_cache(maxsize=None)
def corpus(calculus: str) -> tuple:
    """``IDEM_TERMS`` generated terms, normalized twice, without validation."""
    out = []
    for seed in range(IDEM_TERMS):
        ctx, t = gen_term(calculus, seed, TERM_SIZE, TYPE_DEPTH)
        start = time.perf_counter()
        ty, n = pipeline.normalize(calculus, ctx, t)
        first = time.perf_counter() - start
        back = pipeline.erase(calculus, ctx, ty, n)
        start = time.perf_counter()
        _, n2 = pipeline.normalize(calculus, ctx, back)
        second = time.perf_counter() - start
        out.append(Sample(tuple(ctx), t, ty, n, n2, max(first, second)))
    return tuple(out)


@lru_cache(maxsize=None)
def axiom_runs() -> tuple:
    """``(name, ctx, ty, nf_lhs, nf_rhs)`` for every axiom instance, plus the wall time."""
    start = time.perf_counter()
    runs = []
    for name in sorted(SCHEMAS):
        for seed in range(AXIOM_SEEDS):
            ctx, lhs, rhs = gen_axiom_instance(name, seed, size=25, type_depth=3)
            runs.append((name, ctx, s.infer(ctx, lhs), stlc_norm(ctx, lhs), stlc_norm(ctx, rhs)))
    return tuple(runs), time.perf_counter() - start


# -- 1. axiom soundness ----------------------------------------------------------------


def test_criterion_1_axiom_soundness():
    runs, seconds = axiom_runs()
    agree = sum(nl == nr for _, _, _, nl, nr in runs)
    failing = sorted({name for name, _, _, nl, nr in runs if nl != nr})
    ok = agree == len(runs) == 16 * AXIOM_SEEDS and seconds < 60
    detail = f"{agree}/{len(runs)} instances agree structurally in {seconds:.1f}s (limit 60s)"
    if failing:
        detail += f"; failing schemas {failing}"
    record(1, ok, detail)
    assert ok, detail


# -- 2. idempotence -------------------------------------------------------------------


def test_criterion_2_idempotence():
    parts, ok = [], True
    for calculus in CALCULI:
        samples = corpus(calculus)
        same = sum(smp.nf == smp.nf_again for smp in samples)
        slowest = max(smp.seconds for smp in samples)
        ok &= same == len(samples) == IDEM_TERMS and slowest < 1.0
        parts.append(f"{calculus} {same}/{len(samples)} (slowest {slowest * 1000:.0f}ms)")
    detail = "; ".join(parts)
    record(2, ok, detail)
    assert ok, detail


# -- 3. finite-model soundness -----------------------------------------------------------


def test_criterion_3_finite_model_soundness():
    parts, ok = [], True
    for calculus in CALCULI:
        agree = checked = too_large = 0
        for smp in corpus(calculus)[:ORACLE_TERMS]:
            assert len(smp.ctx) <= 3
            back = pipeline.erase(calculus, smp.ctx, smp.ty, smp.nf)
            try:
                same = oracle_equiv(calculus, smp.ctx, smp.term, back, base_size=2)
            except DomainTooLarge:
                too_large += 1
                continue
            checked += 1
            agree += same
        rate = too_large / ORACLE_TERMS
        ok &= agree == checked and rate < 0.10
        parts.append(f"{calculus} {agree}/{checked} equal, DomainTooLarge {too_large}/{ORACLE_TERMS} ({rate:.1%})")
    detail = "; ".join(parts)
    record(3, ok, detail)
    assert ok, detail


# -- 4. grammar validation -------------------------------------------------------------


def test_criterion_4_grammar_validation():
    total = valid = 0
    bad: list = []

    def check(calculus, ctx, ty, n, where):
        nonlocal total, valid
        total += 1
        try:
            pipeline.validate(calculus, ctx, ty, n)
            valid += 1
        except InvalidNormalForm as exc:
            bad.append(f"{where}: {exc}")

    runs, _ = axiom_runs()
    for name, ctx, ty, nl, nr in runs:
        check("stlc", ctx, ty, nl, name)
        check("stlc", ctx, ty, nr, name)
    for calculus in CALCULI:
        for k, smp in enumerate(corpus(calculus)):
            check(calculus, smp.ctx, smp.ty, smp.nf, f"{calculus}#{k}")
            check(calculus, smp.ctx, smp.ty, smp.nf_again, f"{calculus}#{k}")
    ok = valid == total
    detail = f"{valid}/{total} normal forms pass the validators"
    if bad:
        detail += f"; first failure {bad[0]}"
    record(4, ok, detail)
    assert ok, detail


# -- 5. free cover vs continuation monad --------------------------------------------------


def test_criterion_5_monad_agreement():
    structural = equivalent = too_large = 0
    samples = corpus("stlc")[:MONAD_TERMS]
    for smp in samples:
        n_cc = pipeline.run("stlc", smp.ctx, smp.term, "cont").nf
        if n_cc == smp.nf:
            structural += 1
            equivalent += 1
            continue
        try:
            equivalent += oracle_equiv("stlc", smp.ctx, s.erase(smp.nf), s.erase(n_cc))
        except DomainTooLarge:
            too_large += 1
    ok = equivalent == len(samples) == MONAD_TERMS
    detail = (
        f"{equivalent}/{len(samples)} oracle-equivalent; structural agreement "
        f"{structural}/{len(samples)} ({structural / len(samples):.1%})"
    )
    if too_large:
        detail += f"; {too_large} differing pairs beyond the oracle bound"
    record(5, ok, detail)
    assert ok, detail


# -- 6. kernel laws -----------------------------------------------------------------------


def _random_nested(rng):
    return laws.random_tree(
        rng, 3, 0, lambda r, d: laws.random_tree(r, 2, d, lambda r2, d2: laws.random_tree(r2, 2, d2, laws._rand_nf))
    )


def test_criterion_6_kernel_laws():
    rng = random.Random(6)
    try:
        counts = _all_laws(rng)
    except AssertionError as exc:
        record(6, False, f"law violated: {exc!r}")
        raise
    detail = ", ".join(f"{k} {v}" for k, v in counts.items())
    record(6, True, f"all laws hold: {detail}")


def _all_laws(rng) -> dict:
    return {
        "OPE exhaustive": laws.check_ope_laws_exhaustive(3),
        "OPE random": laws.check_ope_laws_random(1000),
        **{f"rename {c}": laws.check_rename_functor(c, 1000) for c in CALCULI},
        "Cover exhaustive": laws.check_cover_laws_exhaustive(3),
        "Cover random": laws.check_cover_laws_random(1000),
        "CC exhaustive": laws.check_cc_laws(laws.trees(3, 0, laws.nf_leaves), laws.nested_trees(3)),
        "CC random": laws.check_cc_laws(
            [laws.random_tree(rng, 6, 0, laws._rand_nf) for _ in range(1000)],
            [_random_nested(rng) for _ in range(1000)],
        ),
        "CovZ exhaustive": laws.check_slim_laws(2),
        "CovZ random": laws.check_slim_laws_random(1000),
        "Add exhaustive": laws.check_add_laws(laws.pos_types(2)),
        "Add random": laws.check_add_laws_random(1000),
    }


# -- 7. match / reflect coherence ------------------------------------------------------------


def test_criterion_7_match_reflect():
    atom = (laws.P_ATOM,)
    types = laws.pos_types(2, atoms=atom)
    rng = random.Random(7)
    deeper = [laws.random_pos_type(rng, 3, atom) for _ in range(2000)]
    try:
        exhaustive = laws.check_match_reflect(types)
        sampled = laws.check_match_reflect(deeper)
    except AssertionError as exc:
        record(7, False, f"coherence violated: {exc!r}")
        raise
    record(7, True, f"{exhaustive} values over all {len(types)} types, {sampled} values over 2000 sampled deeper types")


# -- 8. surface round trip and fuzzing ---------------------------------------------------------


def test_criterion_8_surface():
    parts = []
    for calculus in CALCULI:
        parts.append(f"{calculus} {laws.check_roundtrip(calculus, ROUNDTRIP_TERMS, 0, TERM_SIZE, TYPE_DEPTH)}")
    try:
        outcomes = laws.check_fuzz(FUZZ_INPUTS)
        crash = None
    except Exception as exc:  # anything outside the library's error hierarchy
        outcomes, crash = {}, exc
    ok = crash is None and sum(outcomes.values()) == FUZZ_INPUTS
    detail = f"round trip {', '.join(parts)}; fuzz {FUZZ_INPUTS} inputs, outcomes {dict(sorted(outcomes.items()))}"
    if crash is not None:
        detail += f"; crash {type(crash).__name__}: {crash}"
    record(8, ok, detail)
    assert ok, detail


# -- 9. golden files ----------------------------------------------------------------------------


def test_criterion_9_golden(capsys):
    results = []
    for case in ("pair", "codiag", "eta_fun"):
        for flag, ext in (([], ".out"), (["--ast"], ".ast")):
            code = cli_main(["norm", "--calculus", "stlc", *flag, str(GOLDEN / f"{case}.nbe")])
            out = capsys.readouterr().out.encode()
            results.append((f"{case}{ext}", code == 0 and out == (GOLDEN / f"{case}{ext}").read_bytes()))
    ok = all(r for _, r in results)
    detail = ", ".join(f"{name} {'ok' if r else 'MISMATCH'}" for name, r in results)
    record(9, ok, detail)
    assert ok, detail
