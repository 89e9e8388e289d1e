"""Normalization by evaluation for pure call-by-push-value.

Positive types are interpreted directly (sums are plain injections, atoms
are variables); the cover monad only appears under ``Comp`` and negative
atoms.  Reflection at a positive type therefore runs in the monad.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import ShapeMismatch
from ..kernel import OPE, lift, lookup, ope_compose, ope_id, rename, weak, wk
from ..values import VFun, VPair, VUnit, vfun
from . import syntax as s
from .syntax import (
    Arr,
    AtomN,
    AtomP,
    Comp,
    CovAbort,
    CovBind,
    CovCase,
    CovReturn,
    CovSplit,
    OneP,
    ProdP,
    SumP,
    Thunk,
    Top,
    With,
    ZeroP,
)


@dataclass(frozen=True)
class VAtomP:
    """A positive atom is interpreted by the variable standing for it."""

    index: int

    def rename(self, tau):
        return VAtomP(tau.table[self.index])


@dataclass(frozen=True)
class VInj:
    i: int
    val: object

    def rename(self, tau):
        return VInj(self.i, rename(tau, self.val))


@dataclass(frozen=True)
class VComp:
    cov: object

    def rename(self, tau):
        return VComp(self.cov.rename(tau))


@dataclass(frozen=True)
class VAtomN:
    cov: object

    def rename(self, tau):
        return VAtomN(self.cov.rename(tau))


# -- the cover monad -----------------------------------------------------------


def cov_map(c, f: Callable):
    match c:
        case CovReturn(j):
            return CovReturn(f(j))
        case CovBind(u, ty, body):
            return CovBind(u, ty, cov_map(body, f))
        case CovSplit(x, body):
            return CovSplit(x, cov_map(body, f))
        case CovCase(x, l, r):
            return CovCase(x, cov_map(l, f), cov_map(r, f))
        case CovAbort():
            return c
    raise ShapeMismatch(f"not a cover: {c!r}")


def cov_stmap(sigma: OPE, c, l: Callable):
    """``l(sigma', j)`` receives the embedding of the base into the leaf context."""
    match c:
        case CovReturn(j):
            return CovReturn(l(sigma, j))
        case CovBind(u, ty, body):
            return CovBind(u, ty, cov_stmap(weak(sigma, ty), body, l))
        case CovSplit(x, body):
            pty = lookup(sigma.target, x)
            return CovSplit(x, cov_stmap(weak(weak(sigma, pty.left), pty.right), body, l))
        case CovCase(x, left, right):
            sty = lookup(sigma.target, x)
            return CovCase(
                x,
                cov_stmap(weak(sigma, sty.left), left, l),
                cov_stmap(weak(sigma, sty.right), right, l),
            )
        case CovAbort():
            return c
    raise ShapeMismatch(f"not a cover: {c!r}")


def cov_join(c):
    match c:
        case CovReturn(inner):
            return inner
        case CovBind(u, ty, body):
            return CovBind(u, ty, cov_join(body))
        case CovSplit(x, body):
            return CovSplit(x, cov_join(body))
        case CovCase(x, l, r):
            return CovCase(x, cov_join(l), cov_join(r))
        case CovAbort():
            return c
    raise ShapeMismatch(f"not a cover: {c!r}")


def cov_transport(c, tau: OPE, leaf: Callable):
    """Rename the tree along ``tau``; ``leaf(sigma, j)`` moves each leaf.

    ``sigma`` embeds the old leaf context into the new one.
    """
    match c:
        case CovReturn(j):
            return CovReturn(leaf(tau, j))
        case CovBind(u, ty, body):
            return CovBind(u.rename(tau), ty, cov_transport(body, lift(tau, ty), leaf))
        case CovSplit(x, body):
            pty = lookup(tau.source, x)
            return CovSplit(tau.table[x], cov_transport(body, lift(lift(tau, pty.left), pty.right), leaf))
        case CovCase(x, l, r):
            sty = lookup(tau.source, x)
            return CovCase(
                tau.table[x],
                cov_transport(l, lift(tau, sty.left), leaf),
                cov_transport(r, lift(tau, sty.right), leaf),
            )
        case CovAbort(x):
            return CovAbort(tau.table[x])
    raise ShapeMismatch(f"not a cover: {c!r}")


def star(ctx: tuple, c1, c2, combine=VPair):
    """Monoidal functoriality: ``c1 ⋆ c2`` with leaves ``combine(a1, a2)``."""

    def outer(sigma, a1):
        def inner(sigma2, a2):
            return combine(rename(sigma2, a1), a2)

        moved = rename(sigma, c2)
        return cov_stmap(ope_id(sigma.target), moved, inner)

    return cov_join(cov_stmap(ope_id(ctx), c1, outer))


def _magic(*_):
    raise ShapeMismatch("reached a value of the empty type")


# -- reflection and reification -----------------------------------------------


def fresh(ctx: tuple, ty):
    """``fresh^P_Γ``: reflect the new variable of ``ctx.P``, in the monad."""
    return reflect_pos(ctx + (ty,), ty, 0)


def reflect_pos(ctx: tuple, ty, x: int):
    match ty:
        case AtomP():
            return CovReturn(VAtomP(x))
        case OneP():
            return CovReturn(VUnit())
        case ProdP(p1, p2):
            ext = ctx + (p1, p2)
            return CovSplit(x, star(ext, reflect_pos(ext, p1, 1), reflect_pos(ext, p2, 0)))
        case ZeroP():
            return CovAbort(x)
        case SumP(p1, p2):
            return CovCase(
                x,
                cov_map(fresh(ctx, p1), lambda a: VInj(1, a)),
                cov_map(fresh(ctx, p2), lambda a: VInj(2, a)),
            )
        case Thunk(n):
            return CovReturn(reflect_neg(ctx, n, s.NeForce(x)))
    raise ShapeMismatch(f"cannot reflect at {ty!r}")


def reflect_neg(ctx: tuple, ty, u):
    match ty:
        case Comp(p):
            return VComp(CovBind(u, p, fresh(ctx, p)))
        case AtomN():
            return VAtomN(CovReturn(u))
        case Top():
            return VUnit()
        case With(n1, n2):
            return VPair(reflect_neg(ctx, n1, s.NePrj(1, u)), reflect_neg(ctx, n2, s.NePrj(2, u)))
        case Arr(p, n):
            def fn(tau, a):
                delta = tau.target
                return reflect_neg(delta, n, s.NeApp(u.rename(tau), reify_pos(delta, p, a)))

            return vfun(ctx, fn)
    raise ShapeMismatch(f"cannot reflect at {ty!r}")


def reify_pos(ctx: tuple, ty, a):
    match ty, a:
        case AtomP(), VAtomP(x):
            return s.VnfVar(x)
        case OneP(), VUnit():
            return s.VnfUnit()
        case ProdP(p1, p2), VPair(a1, a2):
            return s.VnfPair(reify_pos(ctx, p1, a1), reify_pos(ctx, p2, a2))
        case SumP(p1, p2), VInj(i, v):
            return s.VnfInj(i, reify_pos(ctx, p1 if i == 1 else p2, v))
        case Thunk(n), _:
            return s.VnfThunk(reify_neg(ctx, n, a))
    raise ShapeMismatch(f"value {a!r} does not inhabit {ty!r}")


def reify_neg(ctx: tuple, ty, b):
    match ty, b:
        case Comp(p), VComp(c):
            return s.NfRet(cov_stmap(ope_id(ctx), c, lambda sigma, a: reify_pos(sigma.target, p, a)))
        case AtomN(), VAtomN(c):
            return s.NfNe(c)
        case Top(), VUnit():
            return s.NfUnit()
        case With(n1, n2), VPair(b1, b2):
            return s.NfPair(reify_neg(ctx, n1, b1), reify_neg(ctx, n2, b2))
        case Arr(p, n), VFun():
            ext = ctx + (p,)
            step = wk(ctx, p)

            def leaf(sigma, a):
                return reify_neg(sigma.target, n, b.apply(ope_compose(step, sigma), a))

            return s.NfAbs(p, run_nf(ext, n, cov_stmap(ope_id(ext), fresh(ctx, p), leaf)))
    raise ShapeMismatch(f"value {b!r} does not inhabit {ty!r}")


# -- running the monad ---------------------------------------------------------


def run_nf(ctx: tuple, ty, c):
    """``runNf : Cov (Nf N) → Nf N``; pushes the tree towards the leaves."""
    if isinstance(c, CovReturn):
        return c.leaf
    match ty:
        case AtomN():
            return s.NfNe(cov_join(cov_map(c, lambda n: n.cov)))
        case Comp():
            return s.NfRet(cov_join(cov_map(c, lambda n: n.cov)))
        case Top():
            return s.NfUnit()
        case With(n1, n2):
            return s.NfPair(run_nf(ctx, n1, cov_map(c, lambda n: n.fst)), run_nf(ctx, n2, cov_map(c, lambda n: n.snd)))
        case Arr(p, n):
            base = len(ctx)

            def leaf(sigma, nf):
                # The leaf's own binder is identified with the outer one.
                hyp = len(sigma.target) - base - 1
                return nf.body._ren((hyp,) + sigma.table)

            return s.NfAbs(p, run_nf(ctx + (p,), n, cov_transport(c, wk(ctx, p), leaf)))
    raise ShapeMismatch(f"cannot run at {ty!r}")


def run_sem(ctx: tuple, ty, c):
    """``run^N : Cov ⟦N⟧ → ⟦N⟧``: every negative type is monadic."""
    match ty:
        case Comp():
            return VComp(cov_join(cov_map(c, lambda v: v.cov)))
        case AtomN():
            return VAtomN(cov_join(cov_map(c, lambda v: v.cov)))
        case Top():
            return VUnit()
        case With(n1, n2):
            return VPair(run_sem(ctx, n1, cov_map(c, lambda v: v.fst)), run_sem(ctx, n2, cov_map(c, lambda v: v.snd)))
        case Arr(_, n):
            def fn(tau, a):
                delta = tau.target
                applied = cov_stmap(
                    ope_id(delta),
                    rename(tau, c),
                    lambda sigma, f: f.apply(ope_id(sigma.target), rename(sigma, a)),
                )
                return run_sem(delta, n, applied)

            return vfun(ctx, fn)
    raise ShapeMismatch(f"cannot run at {ty!r}")


# -- evaluation ----------------------------------------------------------------


def eval_val(gctx: tuple, v, env: tuple, ctx: tuple):
    match v:
        case s.Var(x):
            return env[len(env) - 1 - x]
        case s.ThunkV(t):
            return eval_tm(gctx, t, env, ctx)
        case s.UnitP():
            return VUnit()
        case s.PairP(a, b):
            return VPair(eval_val(gctx, a, env, ctx), eval_val(gctx, b, env, ctx))
        case s.Inj(i, _, a):
            return VInj(i, eval_val(gctx, a, env, ctx))
    raise ShapeMismatch(f"cannot evaluate value {v!r}")


def _binder(gctx, dom, body, env, ctx) -> VFun:
    ext = gctx + (dom,)

    def fn(tau, a):
        return eval_tm(ext, body, rename(tau, env) + (a,), tau.target)

    return vfun(ctx, fn)


def eval_tm(gctx: tuple, t, env: tuple, ctx: tuple):
    """Evaluate ``t : Tm N gctx`` in ``env : ⟦gctx⟧ ctx``."""
    match t:
        case s.Ret(v):
            return VComp(CovReturn(eval_val(gctx, v, env, ctx)))
        case s.Abs(dom, body):
            return _binder(gctx, dom, body, env, ctx)
        case s.PairN(a, b):
            return VPair(eval_tm(gctx, a, env, ctx), eval_tm(gctx, b, env, ctx))
        case s.UnitN():
            return VUnit()
        case s.Force(v):
            return eval_val(gctx, v, env, ctx)
        case s.App(f, v):
            return eval_tm(gctx, f, env, ctx).apply(ope_id(ctx), eval_val(gctx, v, env, ctx))
        case s.Prj(i, a):
            p = eval_tm(gctx, a, env, ctx)
            return p.fst if i == 1 else p.snd
        case s.Bind(ann, c, body):
            res = s.infer_tm(gctx + (ann,), body)
            f = _binder(gctx, ann, body, env, ctx)
            cov = eval_tm(gctx, c, env, ctx).cov
            return run_sem(ctx, res, cov_stmap(ope_id(ctx), cov, f.apply))
        case s.Split(v, body):
            p = eval_val(gctx, v, env, ctx)
            pty = s.infer_val(gctx, v)
            return eval_tm(gctx + (pty.left, pty.right), body, env + (p.fst, p.snd), ctx)
        case s.Case(v, l, r):
            inj = eval_val(gctx, v, env, ctx)
            sty = s.infer_val(gctx, v)
            if inj.i == 1:
                return eval_tm(gctx + (sty.left,), l, env + (inj.val,), ctx)
            return eval_tm(gctx + (sty.right,), r, env + (inj.val,), ctx)
        case s.Abort(_, v):
            return _magic(eval_val(gctx, v, env, ctx))
    raise ShapeMismatch(f"cannot evaluate term {t!r}")


def id_env(ctx: tuple):
    """The identity environment, generated in the monad."""
    env = CovReturn(())
    for i, ty in enumerate(ctx):
        prefix = ctx[:i]
        env = star(prefix + (ty,), rename(wk(prefix, ty), env), fresh(prefix, ty), lambda g, a: g + (a,))
    return env


def norm(ctx, t):
    ctx = tuple(ctx)
    ty = s.infer_tm(ctx, t)

    def leaf(sigma, env):
        return reify_neg(sigma.target, ty, eval_tm(ctx, t, env, sigma.target))

    return run_nf(ctx, ty, cov_stmap(ope_id(ctx), id_env(ctx), leaf))
