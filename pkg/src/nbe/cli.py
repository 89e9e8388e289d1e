"""Command-line front end: ``nbe {check,norm,eq,oracle,selftest}``.

Exit codes: 0 success or equal, 1 not equal, 2 type or elaboration error,
3 parse error, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import pipeline
from .errors import (
    DomainTooLarge,
    GenerationExhausted,
    InvalidNormalForm,
    NbeError,
    ParseError,
    ShapeMismatch,
)
from .oracle.finite import oracle_equiv
from .oracle.generate import gen_term
from .surface import dump, elaborate, names_of, parse, pretty_file, pretty_nf, pretty_type

EXIT_OK, EXIT_DIFFERENT, EXIT_TYPE, EXIT_PARSE, EXIT_INTERNAL = 0, 1, 2, 3, 4


def _use_color(stream) -> bool:
    mode = os.environ.get("NBE_COLOR", "auto")
    if mode == "always":
        return True
    if mode == "never":
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _diag(msg: str, kind: str = "error") -> None:
    prefix = f"{kind}:"
    if _use_color(sys.stderr):
        prefix = f"\x1b[1;31m{prefix}\x1b[0m"
    print(f"{prefix} {msg}", file=sys.stderr)


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _load(path: str, calculus: str):
    src = parse(_read(path), calculus)
    ctx, t = elaborate(src, calculus)
    return src, ctx, t


# -- subcommands -------------------------------------------------------------------


def cmd_check(args) -> int:
    _, ctx, t = _load(args.file, args.calculus)
    print(pretty_type(pipeline.infer(args.calculus, ctx, t)))
    return EXIT_OK


def cmd_norm(args) -> int:
    src, ctx, t = _load(args.file, args.calculus)
    res = pipeline.run(args.calculus, ctx, t, args.monad or "free")
    if args.ast:
        print(dump(res.nf))
    else:
        print(pretty_nf(args.calculus, ctx, res.ty, res.nf, names_of(src)))
    return EXIT_OK


def _verdict(same: bool) -> int:
    print("equal" if same else "not equal")
    return EXIT_OK if same else EXIT_DIFFERENT


def cmd_eq(args) -> int:
    _, ctx1, t1 = _load(args.file1, args.calculus)
    _, ctx2, t2 = _load(args.file2, args.calculus)
    if ctx1 != ctx2:
        _diag("the two files declare different contexts", "note")
        return _verdict(False)
    r1 = pipeline.run(args.calculus, ctx1, t1, args.monad or "free")
    r2 = pipeline.run(args.calculus, ctx2, t2, args.monad or "free")
    return _verdict(r1.ty == r2.ty and r1.nf == r2.nf)


def cmd_oracle(args) -> int:
    _, ctx1, t1 = _load(args.file1, args.calculus)
    _, ctx2, t2 = _load(args.file2, args.calculus)
    if ctx1 != ctx2:
        _diag("the two files declare different contexts", "note")
        return _verdict(False)
    return _verdict(oracle_equiv(args.calculus, ctx1, t1, t2, args.base_size))


# -- selftest ------------------------------------------------------------------------

PROPERTIES = ("valid", "idempotent", "oracle", "roundtrip")


def selftest_case(calculus: str, seed: int, size: int = 30, depth: int = 2, base_size: int = 2) -> dict:
    """Run every property on one generated term; values are True, False or None (skipped)."""
    out = dict.fromkeys(PROPERTIES)
    ctx, t = gen_term(calculus, seed, size, depth)
    try:
        res = pipeline.run(calculus, ctx, t)
        out["valid"] = True
    except InvalidNormalForm:
        out["valid"] = False
        return out
    back = res.term(calculus)
    out["idempotent"] = pipeline.run(calculus, ctx, back).nf == res.nf
    try:
        out["oracle"] = oracle_equiv(calculus, ctx, t, back, base_size)
    except DomainTooLarge:
        pass
    try:
        out["roundtrip"] = elaborate(parse(pretty_file(calculus, ctx, t)), calculus) == (tuple(ctx), t)
    except NbeError:
        out["roundtrip"] = False
    return out


def _selftest_worker(job):
    return selftest_case(*job)


def cmd_selftest(args) -> int:
    jobs = [(args.calculus, args.seed + k, args.size, args.type_depth, args.base_size) for k in range(args.cases)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_selftest_worker, jobs, chunksize=8))
    else:
        results = [selftest_case(*j) for j in jobs]
    failed = False
    for prop in PROPERTIES:
        vals = [r[prop] for r in results]
        passed = sum(v is True for v in vals)
        bad = [args.seed + k for k, v in enumerate(vals) if v is False]
        skipped = sum(v is None for v in vals)
        line = f"{prop:<11} {passed}/{len(vals) - skipped} passed"
        if skipped:
            line += f", {skipped} skipped"
        if bad:
            failed = True
            line += f"; failing seeds {bad[:10]}"
        print(line)
    return EXIT_INTERNAL if failed else EXIT_OK


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nbe", description="Normalization by evaluation for three calculi.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--calculus", required=True, choices=pipeline.CALCULI)
        p.add_argument("--monad", choices=("free", "cont"), help="cover implementation (stlc only)")

    p = sub.add_parser("check", help="print the type of a term")
    common(p)
    p.add_argument("file")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("norm", help="print the normal form of a term")
    common(p)
    p.add_argument("--ast", action="store_true", help="print a constructor dump instead of source text")
    p.add_argument("file")
    p.set_defaults(fn=cmd_norm)

    for name, fn, doc in (("eq", cmd_eq, "compare normal forms"), ("oracle", cmd_oracle, "compare in the finite model")):
        p = sub.add_parser(name, help=doc)
        common(p)
        p.add_argument("--base-size", type=int, default=2)
        p.add_argument("file1")
        p.add_argument("file2")
        p.set_defaults(fn=fn)

    p = sub.add_parser("selftest", help="run property checks on generated terms")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--size", type=int, default=30)
    p.add_argument("--type-depth", type=int, default=2)
    p.add_argument("--base-size", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.monad and args.calculus != "stlc":
        ap.error("--monad is only meaningful with --calculus stlc")
    try:
        return args.fn(args)
    except ParseError as exc:
        _diag(f"parse error: {exc}")
        return EXIT_PARSE
    except (InvalidNormalForm, ShapeMismatch) as exc:
        _diag(f"internal invariant violated: {exc}")
        return EXIT_INTERNAL
    except DomainTooLarge as exc:
        _diag(f"finite model too large: {exc}")
        return EXIT_TYPE
    except GenerationExhausted as exc:
        _diag(str(exc))
        return EXIT_INTERNAL
    except NbeError as exc:
        _diag(str(exc))
        return EXIT_TYPE
    except OSError as exc:
        _diag(str(exc))
        return EXIT_TYPE


if __name__ == "__main__":
    sys.exit(main())
