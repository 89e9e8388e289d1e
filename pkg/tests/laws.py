"""Law checkers shared by the unit tests and the acceptance suite.

Each ``check_*`` function returns the number of instances it verified and
raises ``AssertionError`` on the first violation.
"""

from __future__ import annotations

import itertools
import random

from nbe.cbpv import syntax as c
from nbe.cbpv.nbe import VAtomP, VInj
from nbe.kernel import LIFT, OPE, WEAK, lookup, ope_compose, ope_id, reindex, rename
from nbe.oracle.generate import gen_term
from nbe.polarized import nbe as pn
from nbe.polarized import syntax as z
from nbe.stlc import syntax as s
from nbe.stlc.cover import CONT, CovAbort, CovCase, CovReturn, cover_join, cover_map, cover_run_nf, cover_stmap
from nbe.values import VPair, VUnit

O, ONE = s.Atom(), s.One()

# -- embeddings -------------------------------------------------------------------


def all_opes(target):
    """Every embedding of a sub-context into ``target``."""
    n = len(target)
    for spine in itertools.product((LIFT, WEAK), repeat=n):
        source = tuple(target[n - 1 - k] for k in reversed(range(n)) if spine[k])
        yield OPE(spine, source, tuple(target))


def random_ope(rng, target, keep=0.6):
    n = len(target)
    spine = tuple(rng.random() < keep for _ in target)
    source = tuple(target[n - 1 - k] for k in reversed(range(n)) if spine[k])
    return OPE(spine, source, tuple(target))


def random_extension(rng, source, pool, extra=3):
    """A random ``tau : source ⊆ target`` inserting up to ``extra`` entries."""
    spine, target = [], []
    rest = list(source)
    inserts = rng.randint(0, extra)
    # walk from the innermost entry outwards
    while rest or inserts:
        if inserts and (not rest or rng.random() < 0.4):
            spine.append(WEAK)
            target.append(rng.choice(pool))
            inserts -= 1
        else:
            spine.append(LIFT)
            target.append(rest.pop())
    return OPE(tuple(spine), tuple(source), tuple(reversed(target)))


def small_contexts(max_len=3, pool=(O, ONE)):
    for n in range(max_len + 1):
        yield from itertools.product(pool, repeat=n)


def check_ope_laws_exhaustive(max_len=3) -> int:
    count = 0
    for ctx in small_contexts(max_len):
        for tau in all_opes(ctx):
            assert ope_compose(ope_id(tau.source), tau) == tau
            assert ope_compose(tau, ope_id(tau.target)) == tau
            for x in range(len(tau.source)):
                assert reindex(ope_id(tau.source), x) == x
                assert lookup(tau.source, x) == lookup(tau.target, reindex(tau, x))
            for t2 in all_opes(tau.source):
                for x in range(len(t2.source)):
                    assert reindex(tau, reindex(t2, x)) == reindex(ope_compose(t2, tau), x)
                for t1 in all_opes(t2.source):
                    assert ope_compose(ope_compose(t1, t2), tau) == ope_compose(t1, ope_compose(t2, tau))
                    count += 1
    return count


def check_ope_laws_random(n=1000, seed=0) -> int:
    rng = random.Random(seed)
    pool = (O, ONE, s.Arr(O, O))
    for _ in range(n):
        ctx = tuple(rng.choice(pool) for _ in range(rng.randint(4, 14)))
        t3 = random_ope(rng, ctx)
        t2 = random_ope(rng, t3.source)
        t1 = random_ope(rng, t2.source)
        assert ope_compose(ope_compose(t1, t2), t3) == ope_compose(t1, ope_compose(t2, t3))
        assert ope_compose(ope_id(t1.source), t1) == t1 and ope_compose(t1, ope_id(t1.target)) == t1
        full = ope_compose(ope_compose(t1, t2), t3)
        for x in range(len(t1.source)):
            assert reindex(t3, reindex(t2, reindex(t1, x))) == reindex(full, x)
    return n


# -- renaming of syntax -----------------------------------------------------------


def naive_rename_stlc(t, table, depth=0):
    """Index-by-index renaming written without the library's tables."""

    def go(u, d):
        match u:
            case s.Var(x) | s.NeVar(x):
                y = x if x < d else table[x - d] + d
                return type(u)(y)
            case s.Abs(dom, b) | s.NfAbs(dom, b):
                return type(u)(dom, go(b, d + 1))
            case s.Case(sc, l, r) | s.NfCase(sc, l, r):
                return type(u)(go(sc, d), go(l, d + 1), go(r, d + 1))
            case s.App(f, a) | s.Pair(f, a) | s.NeApp(f, a) | s.NfPair(f, a):
                return type(u)(go(f, d), go(a, d))
            case s.Prj(i, a) | s.NePrj(i, a):
                return type(u)(i, go(a, d))
            case s.Inj(i, o, a) | s.NfInj(i, o, a):
                return type(u)(i, o, go(a, d))
            case s.Abort(res, a) | s.NfAbort(res, a):
                return type(u)(res, go(a, d))
            case s.NfNe(a):
                return s.NfNe(go(a, d))
            case s.Unit() | s.NfUnit():
                return u
        raise TypeError(u)

    return go(t, depth)


def _infer(calculus, ctx, t):
    if calculus == "stlc":
        return s.infer(ctx, t)
    if calculus == "cbpv":
        return c.infer_tm(ctx, t)
    return z.infer_tm(ctx, t)


_POOLS = {
    "stlc": (O, ONE, s.Sum(O, O)),
    "cbpv": (c.AtomP("p"), c.OneP(), c.Thunk(c.AtomN("n"))),
    "polarized": (c.AtomP("p"), c.AtomN("n"), c.Top()),
}


def check_rename_functor(calculus, n=1000, seed=0, size=20) -> int:
    """Identity and composition laws of renaming on generated terms; renamed
    terms keep their type in the target context."""
    rng = random.Random(seed)
    for k in range(n):
        ctx, t = gen_term(calculus, seed * 100003 + k, size, 2)
        ty = _infer(calculus, ctx, t)
        assert rename(ope_id(ctx), t) == t
        t1 = random_extension(rng, ctx, _POOLS[calculus])
        t2 = random_extension(rng, t1.target, _POOLS[calculus])
        once = rename(t1, t)
        assert rename(t2, once) == rename(ope_compose(t1, t2), t)
        assert _infer(calculus, t1.target, once) == ty
        if calculus == "stlc":
            assert once == naive_rename_stlc(t, t1.table)
    return n


# -- the STLC cover monad ------------------------------------------------------------
#
# Trees live over the base context (o, o+o, 0); ``d`` counts the branch
# hypotheses (all of type o) added along the path, so the scrutinees are
# NeVar(d + 1) for the sum and NeVar(d) for the empty type.

SUM = s.Sum(O, O)
BASE = (O, SUM, s.Zero())


def nf_leaves(d):
    yield s.NfNe(s.NeVar(d + 2))
    if d:
        yield s.NfNe(s.NeVar(0))


def trees(budget, d, leaves):
    for j in leaves(d):
        yield CovReturn(j)
    yield CovAbort(s.NeVar(d))
    if budget > 0:
        subs = list(trees(budget - 1, d + 1, leaves))
        for left in subs:
            for right in subs:
                yield CovCase(s.NeVar(d + 1), SUM, left, right)


def nested_trees(levels, d=0):
    """Trees of trees (``levels`` deep), every level of depth at most one."""
    if levels == 1:
        return trees(1, d, nf_leaves)
    return trees(1, d, lambda d2: nested_trees(levels - 1, d2))


def check_cover_laws_exhaustive(depth=3) -> int:
    count = 0
    ret = lambda _ctx, j: CovReturn(j)  # noqa: E731
    for t in trees(depth, 0, nf_leaves):
        assert cover_join(CovReturn(t)) == t
        assert cover_join(cover_map(BASE, t, ret)) == t
        assert cover_stmap(ope_id(BASE), t, lambda sig, j: j) == t
        # stmap hands every leaf the embedding into its own context
        cover_stmap(ope_id(BASE), t, lambda sig, j: _assert_reaches(sig, j))
        s.check_nf(BASE, O, cover_run_nf(t, O))
        count += 1
    for t3 in nested_trees(3):
        lhs = cover_join(cover_join(t3))
        rhs = cover_join(cover_map(BASE, t3, lambda _ctx, x: cover_join(x)))
        assert lhs == rhs
        count += 1
    return count


def _assert_reaches(sig, j):
    assert sig.source == BASE and sig.target[: len(BASE)] == BASE
    s.check_nf(sig.target, O, j)
    return j


def random_tree(rng, depth, d, leaf):
    r = rng.random()
    if depth == 0 or r < 0.3:
        return CovReturn(leaf(rng, d)) if r < 0.25 or depth == 0 else CovAbort(s.NeVar(d))
    return CovCase(s.NeVar(d + 1), SUM, random_tree(rng, depth - 1, d + 1, leaf), random_tree(rng, depth - 1, d + 1, leaf))


def _rand_nf(rng, d):
    return rng.choice(list(nf_leaves(d)))


def check_cover_laws_random(n=1000, seed=0, depth=6) -> int:
    rng = random.Random(seed)
    for _ in range(n):
        t3 = random_tree(
            rng, depth, 0,
            lambda r, d: random_tree(r, 2, d, lambda r2, d2: random_tree(r2, 2, d2, _rand_nf)),
        )
        assert cover_join(cover_join(t3)) == cover_join(cover_map(BASE, t3, lambda _c, x: cover_join(x)))
        t = random_tree(rng, depth, 0, _rand_nf)
        assert cover_join(CovReturn(t)) == t
        assert cover_join(cover_map(BASE, t, lambda _c, j: CovReturn(j))) == t
    return n


# The continuation monad is observed through run_nf.


def to_cc(ctx, t, leaf=lambda ctx, j: j):
    match t:
        case CovReturn(j):
            return CONT.ret(ctx, leaf(ctx, j))
        case CovAbort(u):
            return CONT.abort(ctx, u)
        case CovCase(u, ty, l, r):
            return CONT.case(ctx, u, ty, to_cc(ctx + (ty.left,), l, leaf), to_cc(ctx + (ty.right,), r, leaf))


def check_cc_laws(trees_iter, nested_iter) -> int:
    """Run every law on both sides and compare the resulting normal forms."""
    count = 0
    run = lambda cc: CONT.run_nf(BASE, O, cc)  # noqa: E731
    for t in trees_iter:
        cc = to_cc(BASE, t)
        expected = cover_run_nf(t, O)
        assert run(cc) == expected
        assert run(CONT.join(BASE, CONT.ret(BASE, cc))) == expected
        assert run(CONT.join(BASE, CONT.map(BASE, cc, lambda ctx, j: CONT.ret(ctx, j)))) == expected
        count += 1
    for t3 in nested_iter:
        cc3 = to_cc(BASE, t3, lambda ctx, mid: to_cc(ctx, mid, lambda ctx2, inner: to_cc(ctx2, inner)))
        lhs = run(CONT.join(BASE, CONT.join(BASE, cc3)))
        rhs = run(CONT.join(BASE, CONT.map(BASE, cc3, lambda ctx, x: CONT.join(ctx, x))))
        assert lhs == rhs == cover_run_nf(cover_join(cover_join(t3)), O)
        count += 1
    return count


# -- the slim cover monad and pattern trees ---------------------------------------------

P_ATOM, N_ATOM = c.AtomP("p"), c.AtomN("n")


def pos_types(depth, atoms=(P_ATOM, c.Thunk(N_ATOM))):
    """All positive types of nesting depth at most ``depth`` (atoms, 0 and 1 have depth 0)."""
    level = list(atoms) + [c.ZeroP(), c.OneP()]
    for _ in range(depth):
        prev = level
        level = list(atoms) + [c.ZeroP(), c.OneP()]
        level += [k(a, b) for k in (c.SumP, c.ProdP) for a in prev for b in prev]
    return level


def spine_tree(ctx, ty):
    """The pattern tree of ``ty`` whose leaves record their embedding."""
    return pn.reflect_cont(ctx, ty, lambda tau, a: tau)


def check_add_laws(types, ctx=(P_ATOM,)) -> int:
    ident = ope_id(ctx)
    count = 0
    for ty in types:
        a = spine_tree(ctx, ty)
        z.check_add(ctx, ty, a, lambda lctx, tau: _same_target(lctx, tau))
        assert z.add_stmap(ident, a, lambda sig, j: j) == a
        # strength: the embedding handed to a leaf is the one reflect recorded
        assert all(ok for _, ok in z.add_leaves(ctx, z.add_stmap(ident, a, lambda sig, j: sig == j)))
        l1 = lambda sig, j: (len(sig.target), j)  # noqa: E731
        l2 = lambda sig, j: (sig.spine, j)  # noqa: E731
        twice = z.add_stmap(ident, z.add_stmap(ident, a, l1), l2)
        fused = z.add_stmap(ident, a, lambda sig, j: l2(sig, l1(sig, j)))
        assert twice == fused
        assert z.add_map(ctx, a, lambda lctx, j: j) == a
        count += 1
    return count


def _same_target(lctx, tau):
    assert tau.target == lctx


def slim_trees(budget, leaves, types):
    for j in leaves:
        yield z.CovReturn(j)
    if budget > 0:
        subs = list(slim_trees(budget - 1, leaves, types))
        for ty in types:
            shape = pn.reflect_cont((), ty, lambda tau, a: None)
            n_leaves = sum(1 for _ in z.add_leaves((), shape))
            for fill in itertools.product(subs, repeat=n_leaves):
                it = iter(fill)
                yield z.CovBind(z.NeVar(0), ty, pn._add_fmap(shape, lambda _: next(it)))


SLIM_TYPES = (c.OneP(), c.ZeroP(), c.SumP(c.OneP(), c.OneP()), c.ProdP(c.OneP(), c.OneP()))


def check_slim_laws(depth=2, leaves=("a", "b")) -> int:
    count = 0
    ts = list(slim_trees(depth, leaves, SLIM_TYPES))
    for t in ts:
        assert pn.cov_join(z.CovReturn(t)) == t
        assert pn.cov_join(pn.cov_map(t, z.CovReturn)) == t
        count += 1
    inner = list(slim_trees(1, leaves, SLIM_TYPES[:3]))
    middle = list(slim_trees(1, inner[:6], SLIM_TYPES[:3]))
    for t3 in slim_trees(1, middle, SLIM_TYPES[:3]):
        assert pn.cov_join(pn.cov_join(t3)) == pn.cov_join(pn.cov_map(t3, pn.cov_join))
        count += 1
    return count


def random_slim(rng, depth, leaf):
    if depth == 0 or rng.random() < 0.3:
        return z.CovReturn(leaf(rng))
    ty = rng.choice(SLIM_TYPES)
    shape = pn.reflect_cont((), ty, lambda tau, a: None)
    return z.CovBind(z.NeVar(0), ty, pn._add_fmap(shape, lambda _: random_slim(rng, depth - 1, leaf)))


def check_slim_laws_random(n=1000, seed=0, depth=5) -> int:
    rng = random.Random(seed)
    for _ in range(n):
        t = random_slim(rng, depth, lambda r: r.choice("ab"))
        assert pn.cov_join(z.CovReturn(t)) == t
        assert pn.cov_join(pn.cov_map(t, z.CovReturn)) == t
        t3 = random_slim(rng, 3, lambda r: random_slim(r, 2, lambda r2: random_slim(r2, 2, lambda r3: r3.choice("ab"))))
        assert pn.cov_join(pn.cov_join(t3)) == pn.cov_join(pn.cov_map(t3, pn.cov_join))
    return n


def check_add_laws_random(n=1000, seed=0, depth=4) -> int:
    rng = random.Random(seed)
    return check_add_laws([random_pos_type(rng, depth) for _ in range(n)])


# -- match / reflect coherence ----------------------------------------------------------


def values_of(ty, atoms):
    """Every value of a positive type in the finite model, as semantic values."""
    match ty:
        case c.AtomP():
            return [("atom", a) for a in atoms]
        case c.ZeroP():
            return []
        case c.OneP():
            return [VUnit()]
        case c.SumP(p1, p2):
            return [VInj(1, v) for v in values_of(p1, atoms)] + [VInj(2, v) for v in values_of(p2, atoms)]
        case c.ProdP(p1, p2):
            return [VPair(a, b) for a in values_of(p1, atoms) for b in values_of(p2, atoms)]
    raise TypeError(ty)


def instantiate(a, env):
    """Replace symbolic hypotheses ``VAtomP(i)`` by the environment's entries."""
    match a:
        case VAtomP(i):
            return env[len(env) - 1 - i]
        case VInj(i, v):
            return VInj(i, instantiate(v, env))
        case VPair(x, y):
            return VPair(instantiate(x, env), instantiate(y, env))
    return a


def check_match_reflect(types, atoms=(0, 1)) -> int:
    """``match(a, reflect_cont(P, k), γ) = k(id, a)`` for every model value ``a``.

    The continuation records how many hypotheses its branch bound, which
    must equal the length of the environment that ``match`` builds.
    """
    count = 0

    def k(tau, sym):
        bound = len(tau.target) - len(tau.source)
        return lambda env: (bound == len(env), instantiate(sym, env))

    for ty in types:
        tree = pn.reflect_cont((), ty, k)
        for a in values_of(ty, atoms):
            assert pn.match(a, tree, ()) == (True, a)
            count += 1
    return count


def random_pos_type(rng, depth, atoms=(P_ATOM, c.Thunk(N_ATOM))):
    if depth == 0 or rng.random() < 0.2:
        return rng.choice(list(atoms) + [c.ZeroP(), c.OneP()])
    kind = rng.choice((c.SumP, c.ProdP))
    return kind(random_pos_type(rng, depth - 1, atoms), random_pos_type(rng, depth - 1, atoms))


# -- surface syntax ------------------------------------------------------------------

from nbe.errors import NbeError  # noqa: E402
from nbe.surface import elaborate, parse, pretty_file  # noqa: E402

# Characters the lexer knows about, so that fuzz inputs get past the first token.
_FUZZ_ALPHABET = b" \n\t()<>[]{}.,;:|\\-+*&>_01oxyzUFTop" + b"abcdefghijklmnopqrstuvwxyz"
_FUZZ_WORDS = [
    b"case ", b"of ", b"inl", b"inr", b"abort", b"fst ", b"snd ", b"thunk ", b"force ", b"ret ",
    b"let ", b" in ", b"split ", b" as ", b"bind", b"var ", b"term ", b"->", b"<-", b"a+ p", b"a- n", b"Top",
]


def check_roundtrip(calculus, n=500, seed=0, size=30, type_depth=3) -> int:
    """``elaborate(parse(pretty t)) == t`` on generated terms."""
    for k in range(n):
        ctx, t = gen_term(calculus, seed * 100003 + k, size, type_depth)
        text = pretty_file(calculus, ctx, t)
        back = elaborate(parse(text, calculus), calculus)
        assert back == (tuple(ctx), t), text
    return n


def fuzz_input(rng) -> bytes:
    """Half raw bytes, half grammar-flavoured noise; at most 256 bytes."""
    length = rng.randint(0, 256)
    if rng.random() < 0.5:
        return bytes(rng.getrandbits(8) for _ in range(length))
    out = bytearray()
    while len(out) < length:
        out += rng.choice(_FUZZ_WORDS) if rng.random() < 0.3 else bytes([rng.choice(_FUZZ_ALPHABET)])
    return bytes(out[:256])


def fuzz_once(data: bytes, calculus: str) -> str:
    """Feed ``data`` to the front end; return the error class name or ``"ok"``.

    Anything other than the library's own errors propagates as a crash.
    """
    try:
        elaborate(parse(data, calculus), calculus)
    except NbeError as exc:
        return type(exc).__name__
    return "ok"


def check_fuzz(n=10_000, seed=0) -> dict:
    rng = random.Random(seed)
    outcomes: dict = {}
    for k in range(n):
        calculus = ("stlc", "cbpv", "polarized")[k % 3]
        kind = fuzz_once(fuzz_input(rng), calculus)
        outcomes[kind] = outcomes.get(kind, 0) + 1
    return outcomes
