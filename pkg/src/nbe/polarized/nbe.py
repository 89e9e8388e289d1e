"""Normalization by evaluation for the focused calculus.

Reflection at a positive type no longer produces a value in a monad; it
produces a pattern tree and calls a continuation once per branch.  Binders
are interpreted by matching their argument against their pattern tree.
"""

from __future__ import annotations

from typing import Callable

from ..cbpv.nbe import VAtomN, VAtomP, VComp, VInj
from ..cbpv.syntax import (
    App,
    Arr,
    AtomN,
    AtomP,
    Comp,
    Force,
    Inj,
    NeApp,
    NePrj,
    NfNe,
    NfPair,
    NfRet,
    NfUnit,
    OneP,
    PairN,
    PairP,
    Prj,
    ProdP,
    Ret,
    SumP,
    Thunk,
    ThunkV,
    Top,
    TyN,
    UnitN,
    UnitP,
    Var,
    VnfInj,
    VnfPair,
    VnfThunk,
    VnfUnit,
    VnfVar,
    With,
    ZeroP,
)
from ..errors import ShapeMismatch
from ..kernel import ope_compose, ope_id, rename, wk
from ..values import VPair, VUnit, vfun
from . import syntax as z
from .syntax import (
    Branch0,
    Branch2,
    CovBind,
    CovReturn,
    HypN,
    HypP,
    Split0,
    Split2,
    add_map,
    add_stmap,
)

__all__ = [
    "VAtomP", "VAtomN", "VComp", "VInj",
    "cov_map", "cov_stmap", "cov_join", "reflect_cont", "reflect_neg",
    "reify_pos", "reify_neg", "run_sem", "match", "fden", "eval_tm",
    "eval_val", "id_env", "norm",
]


# -- the cover monad ---------------------------------------------------------------


def cov_map(c, f: Callable):
    match c:
        case CovReturn(j):
            return CovReturn(f(j))
        case CovBind(u, ty, k):
            return CovBind(u, ty, _add_fmap(k, lambda c2: cov_map(c2, f)))
    raise ShapeMismatch(f"not a cover: {c!r}")


def _add_fmap(a, f):
    """Context-free map over the leaves of a pattern tree."""
    match a:
        case HypP(ty, j) | HypN(ty, j):
            return type(a)(ty, f(j))
        case Branch0():
            return a
        case Branch2(x, y):
            return Branch2(_add_fmap(x, f), _add_fmap(y, f))
        case Split0(j):
            return Split0(f(j))
        case Split2(e):
            return Split2(_add_fmap(e, lambda inner: _add_fmap(inner, f)))
    raise ShapeMismatch(f"not a pattern tree: {a!r}")


def cov_stmap(sigma, c, l: Callable):
    match c:
        case CovReturn(j):
            return CovReturn(l(sigma, j))
        case CovBind(u, ty, k):
            return CovBind(u, ty, add_stmap(sigma, k, lambda s2, c2: cov_stmap(s2, c2, l)))
    raise ShapeMismatch(f"not a cover: {c!r}")


def cov_join(c):
    """Flatten; recursion descends the outer tree only, so it terminates."""
    match c:
        case CovReturn(inner):
            return inner
        case CovBind(u, ty, k):
            return CovBind(u, ty, _add_fmap(k, cov_join))
    raise ShapeMismatch(f"not a cover: {c!r}")


def _magic(*_):
    raise ShapeMismatch("reached a value of the empty type")


# -- reflection and reification -----------------------------------------------------


def reflect_cont(ctx: tuple, ty, k: Callable):
    """Split a hypothesis of type ``ty``; ``k(tau, a)`` is called per branch."""
    match ty:
        case AtomP():
            return HypP(ty, k(wk(ctx, ty), VAtomP(0)))
        case Thunk(n):
            ext = ctx + (n,)
            return HypN(n, k(wk(ctx, n), reflect_neg(ext, n, z.NeVar(0))))
        case ZeroP():
            return Branch0()
        case SumP(p1, p2):
            return Branch2(
                reflect_cont(ctx, p1, lambda tau, a: k(tau, VInj(1, a))),
                reflect_cont(ctx, p2, lambda tau, a: k(tau, VInj(2, a))),
            )
        case OneP():
            return Split0(k(ope_id(ctx), VUnit()))
        case ProdP(p1, p2):
            def first(t1, a1):
                def second(t2, a2):
                    return k(ope_compose(t1, t2), VPair(rename(t2, a1), a2))

                return reflect_cont(t1.target, p2, second)

            return Split2(reflect_cont(ctx, p1, first))
    raise ShapeMismatch(f"cannot reflect at {ty!r}")


def reflect_neg(ctx: tuple, ty, u):
    match ty:
        case Comp(p):
            return VComp(CovBind(u, p, reflect_cont(ctx, p, lambda tau, a: CovReturn(a))))
        case AtomN():
            return VAtomN(CovReturn(u))
        case Top():
            return VUnit()
        case With(n1, n2):
            return VPair(reflect_neg(ctx, n1, NePrj(1, u)), reflect_neg(ctx, n2, NePrj(2, u)))
        case Arr(p, n):
            def fn(tau, a):
                delta = tau.target
                return reflect_neg(delta, n, NeApp(u.rename(tau), reify_pos(delta, p, a)))

            return vfun(ctx, fn)
    raise ShapeMismatch(f"cannot reflect at {ty!r}")


def reify_pos(ctx: tuple, ty, a):
    match ty, a:
        case AtomP(), VAtomP(x):
            return VnfVar(x)
        case OneP(), VUnit():
            return VnfUnit()
        case ProdP(p1, p2), VPair(a1, a2):
            return VnfPair(reify_pos(ctx, p1, a1), reify_pos(ctx, p2, a2))
        case SumP(p1, p2), VInj(i, v):
            return VnfInj(i, reify_pos(ctx, p1 if i == 1 else p2, v))
        case Thunk(n), _:
            return VnfThunk(reify_neg(ctx, n, a))
    raise ShapeMismatch(f"value {a!r} does not inhabit {ty!r}")


def reify_neg(ctx: tuple, ty, b):
    match ty, b:
        case Comp(p), VComp(c):
            return NfRet(cov_stmap(ope_id(ctx), c, lambda sigma, a: reify_pos(sigma.target, p, a)))
        case AtomN(), VAtomN(c):
            return NfNe(c)
        case Top(), VUnit():
            return NfUnit()
        case With(n1, n2), VPair(b1, b2):
            return NfPair(reify_neg(ctx, n1, b1), reify_neg(ctx, n2, b2))
        case Arr(p, n), _:
            return z.NfAbs(p, reflect_cont(ctx, p, lambda tau, a: reify_neg(tau.target, n, b.apply(tau, a))))
    raise ShapeMismatch(f"value {b!r} does not inhabit {ty!r}")


def run_sem(ctx: tuple, ty, c):
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


# -- evaluation ----------------------------------------------------------------------


def match(a, e, env: tuple):
    """Match ``a`` against a pattern tree of evaluators ``env -> J``."""
    match e:
        case HypP(_, k) | HypN(_, k):
            return k(env + (a,))
        case Split0(k):
            return k(env)
        case Split2(inner):
            if not isinstance(a, VPair):
                raise ShapeMismatch(f"split of {a!r}")
            second = _add_fmap(inner, lambda e2: lambda g: match(a.snd, e2, g))
            return match(a.fst, second, env)
        case Branch0():
            return _magic(a)
        case Branch2(e1, e2):
            if not isinstance(a, VInj):
                raise ShapeMismatch(f"branch on {a!r}")
            return match(a.val, e1 if a.i == 1 else e2, env)
    raise ShapeMismatch(f"not a pattern tree: {e!r}")


def fden(gctx: tuple, body, env: tuple, ctx: tuple):
    """Interpret a binder ``body : Add P (Tm N)`` as a Kripke function."""

    def fn(tau, a):
        phi = tau.target
        evs = add_map(gctx, body, lambda lctx, t: lambda g: eval_tm(lctx, t, g, phi))
        return match(a, evs, rename(tau, env))

    return vfun(ctx, fn)


def eval_val(gctx: tuple, v, env: tuple, ctx: tuple):
    match v:
        case Var(x):
            return env[len(env) - 1 - x]
        case ThunkV(t):
            return eval_tm(gctx, t, env, ctx)
        case UnitP():
            return VUnit()
        case PairP(a, b):
            return VPair(eval_val(gctx, a, env, ctx), eval_val(gctx, b, env, ctx))
        case Inj(i, _, a):
            return VInj(i, eval_val(gctx, a, env, ctx))
    raise ShapeMismatch(f"cannot evaluate value {v!r}")


def eval_tm(gctx: tuple, t, env: tuple, ctx: tuple):
    match t:
        case z.VarN(x):
            return env[len(env) - 1 - x]
        case Ret(v):
            return VComp(CovReturn(eval_val(gctx, v, env, ctx)))
        case z.Abs(_, body, _):
            return fden(gctx, body, env, ctx)
        case PairN(a, b):
            return VPair(eval_tm(gctx, a, env, ctx), eval_tm(gctx, b, env, ctx))
        case UnitN():
            return VUnit()
        case Force(v):
            return eval_val(gctx, v, env, ctx)
        case App(f, v):
            return eval_tm(gctx, f, env, ctx).apply(ope_id(ctx), eval_val(gctx, v, env, ctx))
        case Prj(i, a):
            p = eval_tm(gctx, a, env, ctx)
            return p.fst if i == 1 else p.snd
        case z.Bind(c, body, _):
            res = z.infer_tm(gctx, t)
            f = fden(gctx, body, env, ctx)
            cov = eval_tm(gctx, c, env, ctx).cov
            return run_sem(ctx, res, cov_stmap(ope_id(ctx), cov, f.apply))
    raise ShapeMismatch(f"cannot evaluate term {t!r}")


def id_env(ctx: tuple) -> tuple:
    env = ()
    for i, ty in enumerate(ctx):
        prefix = ctx[:i]
        env = rename(wk(prefix, ty), env)
        if isinstance(ty, TyN):
            env += (reflect_neg(prefix + (ty,), ty, z.NeVar(0)),)
        else:
            env += (VAtomP(0),)
    return env


def norm(ctx, t):
    ctx = z.check_ctx(ctx)
    ty = z.infer_tm(ctx, t)
    return reify_neg(ctx, ty, eval_tm(ctx, t, id_env(ctx), ctx))
