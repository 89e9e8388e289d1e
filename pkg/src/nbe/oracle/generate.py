"""Seeded, type-directed generators of well-typed terms for all calculi.

Generation picks a context and a goal type, then builds an inhabitant by
trying constructors in random order and backtracking on failure.  Besides
variables, introductions and eliminations, the generators deliberately
produce redexes (applied lambdas, projected pairs, cased injections, bound
returns) so that normalization has work to do.

A run that cannot find an inhabitant within its budget is abandoned and
retried with a fresh sub-seed drawn from the original seed, so the result
is still a deterministic function of the seed.
"""

from __future__ import annotations

import logging
import random
from typing import Callable

from ..cbpv import syntax as c
from ..errors import GenerationExhausted
from ..polarized import syntax as z
from ..stlc import syntax as s

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 400


class _Fail(Exception):
    pass


def _spine_cost(path, head: int) -> int:
    """Smallest size of an elimination spine along ``path``."""
    return head + len(path) + sum(1 for op, _ in path if op == "app")


class _Gen:
    """Shared machinery: a seeded RNG and a global step budget."""

    def __init__(self, rng: random.Random, steps: int = 4000):
        self.rng = rng
        self.steps = steps

    def tick(self):
        self.steps -= 1
        if self.steps < 0:
            raise _Fail("out of steps")

    def split(self, n: int, parts: int) -> list[int]:
        """Distribute a budget of ``n`` over ``parts`` children (each ≥ 1)."""
        if n < parts:
            raise _Fail("budget too small")
        cuts = sorted(self.rng.randint(0, n - parts) for _ in range(parts - 1))
        sizes, prev = [], 0
        for cut in cuts + [n - parts]:
            sizes.append(cut - prev + 1)
            prev = cut
        return sizes

    def first(self, options: list[tuple[float, Callable]]):
        """Try weighted options in a random order until one succeeds."""
        options = [o for o in options if o[0] > 0]
        while options:
            total = sum(w for w, _ in options)
            pick = self.rng.uniform(0, total)
            for k, (w, fn) in enumerate(options):
                pick -= w
                if pick <= 0:
                    break
            options.pop(k)
            try:
                return fn()
            except _Fail:
                continue
        raise _Fail("no option applies")


# -- STLC ------------------------------------------------------------------------------


def stlc_type(rng: random.Random, depth: int, zero: float = 0.05):
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < zero:
            return s.Zero()
        return s.One() if r < 0.3 else s.Atom()
    k = rng.randrange(3)
    a, b = stlc_type(rng, depth - 1, zero), stlc_type(rng, depth - 1, zero)
    return (s.Sum, s.Prod, s.Arr)[k](a, b)


def _stlc_paths(ty, goal, depth=3):
    """Elimination paths from ``ty`` to ``goal``: lists of ('app', A) / ('prj', i)."""
    out = []
    if ty == goal:
        out.append([])
    if depth == 0:
        return out
    match ty:
        case s.Arr(a, b):
            out += [[("app", a)] + p for p in _stlc_paths(b, goal, depth - 1)]
        case s.Prod(a, b):
            out += [[("prj", 1)] + p for p in _stlc_paths(a, goal, depth - 1)]
            out += [[("prj", 2)] + p for p in _stlc_paths(b, goal, depth - 1)]
    return out


class StlcGen(_Gen):
    def __init__(self, rng, type_depth: int = 2, steps: int = 4000):
        super().__init__(rng, steps)
        self.type_depth = type_depth

    def small_type(self):
        return stlc_type(self.rng, max(0, min(self.type_depth, 2) - 1), zero=0.0)

    def term(self, ctx: tuple, ty, n: int):
        self.tick()
        if n <= 0:
            raise _Fail("no budget")
        rng = self.rng
        opts = []
        heads = [
            (x, p)
            for x in range(len(ctx))
            for p in _stlc_paths(ctx[len(ctx) - 1 - x], ty)
            if _spine_cost(p, 1) <= n
        ]
        if heads:
            opts.append((3.0, lambda: self.spine(ctx, *rng.choice(heads), n)))
        match ty:
            case s.One():
                opts.append((1.0, lambda: s.Unit()))
            case s.Prod(a, b):
                opts.append((3.0, lambda: self._pair(ctx, a, b, n)))
            case s.Arr(a, b):
                opts.append((3.0, lambda: s.Abs(a, self.term(ctx + (a,), b, n - 1))))
            case s.Sum(a, b):
                opts.append((3.0, lambda: self._inj(ctx, ty, n)))
        if n >= 4:
            big = 1.0 if n >= 8 else 0.3
            opts += [
                (big, lambda: self._case(ctx, ty, n)),
                (big, lambda: self._beta_app(ctx, ty, n)),
                (big * 0.5, lambda: self._beta_prj(ctx, ty, n)),
                (big * 0.5, lambda: self._beta_case(ctx, ty, n)),
            ]
        zeros = [x for x in range(len(ctx)) for p in _stlc_paths(ctx[len(ctx) - 1 - x], s.Zero()) if len(p) + 2 <= n]
        if zeros:
            opts.append((1.0, lambda: s.Abort(ty, self.term(ctx, s.Zero(), n - 1))))
        return self.first(opts)

    def spine(self, ctx, x, path, n):
        if _spine_cost(path, 1) > n:
            raise _Fail("spine too long")
        t = s.Var(x)
        apps = [a for op, a in path if op == "app"]
        sizes = self.split(n - 1 - len(path), len(apps)) if apps else []
        for op, arg in path:
            if op == "app":
                t = s.App(t, self.term(ctx, arg, sizes.pop(0)))
            else:
                t = s.Prj(arg, t)
        return t

    def _pair(self, ctx, a, b, n):
        n1, n2 = self.split(n - 1, 2)
        return s.Pair(self.term(ctx, a, n1), self.term(ctx, b, n2))

    def _inj(self, ctx, ty, n):
        i = self.rng.choice((1, 2))
        mine, other = (ty.left, ty.right) if i == 1 else (ty.right, ty.left)
        return s.Inj(i, other, self.term(ctx, mine, n - 1))

    def _case(self, ctx, ty, n):
        sums = [
            (x, path, sty)
            for x in range(len(ctx))
            for path, sty in self._sum_paths(ctx[len(ctx) - 1 - x])
        ]
        n0, n1, n2 = self.split(n - 1, 3)
        if sums and self.rng.random() < 0.8:
            x, path, sty = self.rng.choice(sums)
            scrut = self.spine(ctx, x, path, n0)
        else:
            sty = s.Sum(self.small_type(), self.small_type())
            scrut = self.term(ctx, sty, n0)
        return s.Case(scrut, self.term(ctx + (sty.left,), ty, n1), self.term(ctx + (sty.right,), ty, n2))

    def _sum_paths(self, t):
        out = []

        def walk(ty, path, d):
            if isinstance(ty, s.Sum):
                out.append((path, ty))
            if d == 0:
                return
            match ty:
                case s.Arr(a, b):
                    walk(b, path + [("app", a)], d - 1)
                case s.Prod(a, b):
                    walk(a, path + [("prj", 1)], d - 1)
                    walk(b, path + [("prj", 2)], d - 1)

        walk(t, [], 2)
        return out

    def _beta_app(self, ctx, ty, n):
        a = self.small_type()
        n1, n2 = self.split(n - 2, 2)
        return s.App(s.Abs(a, self.term(ctx + (a,), ty, n1)), self.term(ctx, a, n2))

    def _beta_prj(self, ctx, ty, n):
        other = self.small_type()
        i = self.rng.choice((1, 2))
        n1, n2 = self.split(n - 2, 2)
        mine, junk = self.term(ctx, ty, n1), self.term(ctx, other, n2)
        return s.Prj(i, s.Pair(mine, junk) if i == 1 else s.Pair(junk, mine))

    def _beta_case(self, ctx, ty, n):
        a, b = self.small_type(), self.small_type()
        n0, n1, n2 = self.split(n - 2, 3)
        i = self.rng.choice((1, 2))
        arg = self.term(ctx, a if i == 1 else b, n0)
        scrut = s.Inj(i, b if i == 1 else a, arg)
        return s.Case(scrut, self.term(ctx + (a,), ty, n1), self.term(ctx + (b,), ty, n2))


# -- CBPV ------------------------------------------------------------------------------


P_ATOM = c.AtomP("p")
N_ATOM = c.AtomN("n")


def cbpv_pos(rng, depth, zero=0.05):
    if depth <= 0 or rng.random() < 0.3:
        r = rng.random()
        if r < zero:
            return c.ZeroP()
        return c.OneP() if r < 0.3 else P_ATOM
    k = rng.randrange(4)
    if k == 3:
        return c.Thunk(cbpv_neg(rng, depth - 1, zero))
    return (c.SumP, c.ProdP, c.SumP)[k](cbpv_pos(rng, depth - 1, zero), cbpv_pos(rng, depth - 1, zero))


def cbpv_neg(rng, depth, zero=0.05):
    if depth <= 0 or rng.random() < 0.25:
        return c.Top() if rng.random() < 0.2 else N_ATOM
    k = rng.randrange(4)
    if k == 0:
        return c.With(cbpv_neg(rng, depth - 1, zero), cbpv_neg(rng, depth - 1, zero))
    if k == 1:
        return c.Arr(cbpv_pos(rng, depth - 1, zero), cbpv_neg(rng, depth - 1, zero))
    return c.Comp(cbpv_pos(rng, depth - 1, zero))


def _neg_paths(ty, goal, depth=3):
    """Paths of ('app', P) / ('prj', i) from a negative type to ``goal``."""
    out = [[]] if ty == goal else []
    if depth == 0:
        return out
    match ty:
        case c.Arr(p, n):
            out += [[("app", p)] + q for q in _neg_paths(n, goal, depth - 1)]
        case c.With(a, b):
            out += [[("prj", 1)] + q for q in _neg_paths(a, goal, depth - 1)]
            out += [[("prj", 2)] + q for q in _neg_paths(b, goal, depth - 1)]
    return out


class CbpvGen(_Gen):
    """Generates CBPV terms; the polarized generator overrides the binders."""

    def __init__(self, rng, type_depth: int = 2, steps: int = 4000):
        super().__init__(rng, steps)
        self.type_depth = type_depth

    def small_pos(self):
        return cbpv_pos(self.rng, max(0, min(self.type_depth, 2) - 1), zero=0.0)

    # negative heads: variables usable with force (CBPV) or directly (polarized)
    def neg_heads(self, ctx):
        for x in range(len(ctx)):
            ty = ctx[len(ctx) - 1 - x]
            if isinstance(ty, c.Thunk):
                yield x, ty.neg

    head_cost = 2

    def head(self, x):
        return c.Force(c.Var(x))

    def value(self, ctx, ty, n):
        self.tick()
        if n <= 0:
            raise _Fail("no budget")
        opts = []
        vars_ = [x for x in range(len(ctx)) if ctx[len(ctx) - 1 - x] == ty and self.value_var_ok(ty)]
        if vars_:
            opts.append((3.0, lambda: c.Var(self.rng.choice(vars_))))
        match ty:
            case c.OneP():
                opts.append((1.0, lambda: c.UnitP()))
            case c.ProdP(a, b):
                def pair():
                    n1, n2 = self.split(n - 1, 2)
                    return c.PairP(self.value(ctx, a, n1), self.value(ctx, b, n2))

                opts.append((2.0, pair))
            case c.SumP(a, b):
                def inj():
                    i = self.rng.choice((1, 2))
                    mine, other = (a, b) if i == 1 else (b, a)
                    return c.Inj(i, other, self.value(ctx, mine, n - 1))

                opts.append((2.0, inj))
            case c.Thunk(m):
                opts.append((2.0, lambda: c.ThunkV(self.term(ctx, m, n - 1))))
        return self.first(opts)

    def value_var_ok(self, ty):
        return True

    def term(self, ctx, ty, n):
        self.tick()
        if n <= 0:
            raise _Fail("no budget")
        rng = self.rng
        opts = []
        heads = [
            (x, p) for x, m in self.neg_heads(ctx) for p in _neg_paths(m, ty) if _spine_cost(p, self.head_cost) <= n
        ]
        if heads:
            opts.append((3.0, lambda: self.spine(ctx, *rng.choice(heads), n)))
        match ty:
            case c.Comp(p):
                opts.append((3.0, lambda: c.Ret(self.value(ctx, p, n - 1))))
            case c.Top():
                opts.append((1.0, lambda: c.UnitN()))
            case c.With(a, b):
                def pair():
                    n1, n2 = self.split(n - 1, 2)
                    return c.PairN(self.term(ctx, a, n1), self.term(ctx, b, n2))

                opts.append((3.0, pair))
            case c.Arr(p, m):
                opts.append((3.0, lambda: self.abs(ctx, p, m, n)))
        if n >= 4:
            big = 1.0 if n >= 8 else 0.3
            opts += [
                (big * 1.5, lambda: self.bind(ctx, ty, n)),
                (big * 0.5, lambda: self._beta_force(ctx, ty, n)),
                (big * 0.5, lambda: self._beta_app(ctx, ty, n)),
            ]
        opts += self.positive_elims(ctx, ty, n)
        return self.first(opts)

    def spine(self, ctx, x, path, n):
        if _spine_cost(path, self.head_cost) > n:
            raise _Fail("spine too long")
        t = self.head(x)
        apps = [a for op, a in path if op == "app"]
        sizes = self.split(n - self.head_cost - len(path), len(apps)) if apps else []
        for op, arg in path:
            t = c.App(t, self.value(ctx, arg, sizes.pop(0))) if op == "app" else c.Prj(arg, t)
        return t

    def abs(self, ctx, p, m, n):
        return c.Abs(p, self.term(ctx + (p,), m, n - 1))

    def bind(self, ctx, ty, n):
        comps = [m.pos for _, m0 in self.neg_heads(ctx) for m in [m0] if isinstance(m, c.Comp)]
        p = self.rng.choice(comps) if comps and self.rng.random() < 0.7 else self.small_pos()
        n1, n2 = self.split(n - 1, 2)
        return self.make_bind(ctx, p, self.term(ctx, c.Comp(p), n1), ty, n2)

    def make_bind(self, ctx, p, comp, ty, n):
        return c.Bind(p, comp, self.term(ctx + (p,), ty, n))

    def _beta_force(self, ctx, ty, n):
        return c.Force(c.ThunkV(self.term(ctx, ty, n - 2)))

    def _beta_app(self, ctx, ty, n):
        p = self.small_pos()
        n1, n2 = self.split(n - 2, 2)
        fn = self.abs(ctx, p, ty, n1 + 1)
        return c.App(fn, self.value(ctx, p, n2))

    def positive_elims(self, ctx, ty, n):
        opts = []
        for x in range(len(ctx)):
            pty = ctx[len(ctx) - 1 - x]
            match pty:
                case c.ProdP(a, b):
                    opts.append((1.5, lambda x=x, a=a, b=b: c.Split(c.Var(x), self.term(ctx + (a, b), ty, n - 2))))
                case c.SumP(a, b) if n >= 3:
                    def case(x=x, a=a, b=b):
                        n1, n2 = self.split(n - 2, 2)
                        return c.Case(c.Var(x), self.term(ctx + (a,), ty, n1), self.term(ctx + (b,), ty, n2))

                    opts.append((1.5, case))
                case c.ZeroP() if n >= 2:
                    opts.append((1.0, lambda x=x: c.Abort(ty, c.Var(x))))
        if n >= 6:
            def beta_case():
                a, b = self.small_pos(), self.small_pos()
                n0, n1, n2 = self.split(n - 2, 3)
                i = self.rng.choice((1, 2))
                v = c.Inj(i, b if i == 1 else a, self.value(ctx, a if i == 1 else b, n0))
                return c.Case(v, self.term(ctx + (a,), ty, n1), self.term(ctx + (b,), ty, n2))

            def beta_split():
                a, b = self.small_pos(), self.small_pos()
                n0, n1, n2 = self.split(n - 2, 3)
                v = c.PairP(self.value(ctx, a, n0), self.value(ctx, b, n1))
                return c.Split(v, self.term(ctx + (a, b), ty, n2))

            opts += [(0.4, beta_case), (0.4, beta_split)]
        return opts


# -- polarized ---------------------------------------------------------------------


class PolGen(CbpvGen):
    """Focused terms: binders carry complete pattern trees."""

    def neg_heads(self, ctx):
        for x in range(len(ctx)):
            ty = ctx[len(ctx) - 1 - x]
            if isinstance(ty, c.TyN):
                yield x, ty

    head_cost = 1

    def head(self, x):
        return z.VarN(x)

    def value_var_ok(self, ty):
        return isinstance(ty, c.AtomP)

    def add(self, ctx, p, n, leaf):
        """A complete pattern tree for ``p`` whose leaves are ``leaf(ctx', n')``."""
        match p:
            case c.AtomP():
                return z.HypP(p, leaf(ctx + (p,), n))
            case c.Thunk(m):
                return z.HypN(m, leaf(ctx + (m,), n))
            case c.ZeroP():
                return z.Branch0()
            case c.OneP():
                return z.Split0(leaf(ctx, n))
            case c.SumP(a, b):
                n1, n2 = self.split(n, 2)
                return z.Branch2(self.add(ctx, a, n1, leaf), self.add(ctx, b, n2, leaf))
            case c.ProdP(a, b):
                return z.Split2(self.add(ctx, a, n, lambda c1, n1: self.add(c1, b, n1, leaf)))
        raise _Fail(f"no pattern tree for {p}")

    def abs(self, ctx, p, m, n):
        tree = self.add(ctx, p, n - 1, lambda c1, n1: self.term(c1, m, n1))
        return z.Abs(p, tree, m if z.leafless(tree) else None)

    def make_bind(self, ctx, p, comp, ty, n):
        tree = self.add(ctx, p, n, lambda c1, n1: self.term(c1, ty, n1))
        return z.Bind(comp, tree, ty if z.leafless(tree) else None)

    def bind(self, ctx, ty, n):
        comps = [m.pos for _, m in self.neg_heads(ctx) if isinstance(m, c.Comp)]
        p = self.rng.choice(comps) if comps and self.rng.random() < 0.7 else self.small_pos()
        n1, n2 = self.split(n - 1, 2)
        return self.make_bind(ctx, p, self.term(ctx, c.Comp(p), n1), ty, n2)

    def positive_elims(self, ctx, ty, n):
        if n < 5:
            return []

        def beta_bind():
            p = self.small_pos()
            n1, n2 = self.split(n - 2, 2)
            return self.make_bind(ctx, p, c.Ret(self.value(ctx, p, n1)), ty, n2)

        return [(0.6, beta_bind)]


def pol_hyp(rng, depth):
    if rng.random() < 0.35:
        return P_ATOM
    return cbpv_neg(rng, depth, zero=0.0)


# -- entry points ------------------------------------------------------------------------


def _stlc_setup(rng, size, depth):
    k = rng.randint(0, min(3, max(0, size - 1)))
    ctx = tuple(stlc_type(rng, depth) for _ in range(k))
    return ctx, stlc_type(rng, depth), StlcGen(rng, depth)


def _cbpv_setup(rng, size, depth):
    k = rng.randint(0, min(3, max(0, size - 1)))
    ctx = tuple(cbpv_pos(rng, depth) for _ in range(k))
    return ctx, cbpv_neg(rng, depth), CbpvGen(rng, depth)


def _pol_setup(rng, size, depth):
    k = rng.randint(0, min(3, max(0, size - 1)))
    ctx = tuple(pol_hyp(rng, depth) for _ in range(k))
    return ctx, cbpv_neg(rng, depth), PolGen(rng, depth)


_SETUP = {"stlc": _stlc_setup, "cbpv": _cbpv_setup, "polarized": _pol_setup}

_SIZE = {"stlc": s.term_size, "cbpv": c.term_size, "polarized": z.term_size}


def gen_term(calculus: str, seed: int, size_bound: int = 20, type_depth_bound: int = 2):
    """A well-typed ``(ctx, term)`` with ``term_size(term) <= size_bound``.

    Deterministic in ``seed``.  Raises :class:`GenerationExhausted` if no
    attempt succeeds.
    """
    if size_bound < 1 or type_depth_bound < 0:
        raise ValueError("bounds must be positive")
    setup = _SETUP[calculus]
    master = random.Random(seed)
    for attempt in range(MAX_ATTEMPTS):
        sub = master.getrandbits(32)
        rng = random.Random(sub)
        ctx, goal, gen = setup(rng, size_bound, type_depth_bound)
        try:
            t = gen.term(ctx, goal, rng.randint(max(1, size_bound // 2), size_bound))
        except (_Fail, RecursionError):
            continue
        if attempt:
            log.debug("seed %d: %d attempts, succeeded with sub-seed %d", seed, attempt + 1, sub)
        assert _SIZE[calculus](t) <= size_bound
        return ctx, t
    raise GenerationExhausted(f"no {calculus} term found for seed {seed} within {MAX_ATTEMPTS} attempts")


def gen_typed(calculus: str, rng: random.Random, ctx: tuple, ty, size: int, type_depth: int = 2):
    """Generate a term of type ``ty`` in ``ctx``; raises GenerationExhausted."""
    gen = {"stlc": StlcGen, "cbpv": CbpvGen, "polarized": PolGen}[calculus](rng, type_depth)
    try:
        return gen.term(ctx, ty, size)
    except (_Fail, RecursionError) as exc:
        raise GenerationExhausted(str(exc)) from None
