"""Normalization by evaluation for the STLC with weak sums.

Types are interpreted as presheaves made data:

=========  =====================================================
type       semantic value
=========  =====================================================
``1``      :class:`VUnit`
``A × B``  :class:`VPair`
``A ⇒ B``  :class:`VFun` (Kripke function)
``o``      :class:`VPos` of a cover with :class:`LNe` leaves
``0``      :class:`VPos` of a cover without leaves
``A + B``  :class:`VPos` of a cover with :class:`LInl`/:class:`LInr` leaves
=========  =====================================================

The normalizer is written once against the cover-monad services and is
instantiated with either :data:`~nbe.stlc.cover.FREE` or
:data:`~nbe.stlc.cover.CONT`.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ShapeMismatch
from ..kernel import ope_id, rename, wk
from ..values import VFun, VPair, VUnit, vfun
from . import syntax as s
from .cover import FREE, MONADS
from .syntax import Arr, Atom, One, Prod, Sum, Ty, Zero


@dataclass(frozen=True)
class VPos:
    cover: object

    def rename(self, tau):
        return VPos(rename(tau, self.cover))


@dataclass(frozen=True)
class LNe:
    ne: object

    def rename(self, tau):
        return LNe(self.ne.rename(tau))


@dataclass(frozen=True)
class LInl:
    val: object

    def rename(self, tau):
        return LInl(rename(tau, self.val))


@dataclass(frozen=True)
class LInr:
    val: object

    def rename(self, tau):
        return LInr(rename(tau, self.val))


def _magic(*_):
    raise ShapeMismatch("reached a leaf of the empty type")


class Normalizer:
    def __init__(self, monad=FREE):
        if isinstance(monad, str):
            monad = MONADS[monad]
        self.m = monad

    # -- reflection and reification -----------------------------------------

    def fresh(self, ctx: tuple, ty: Ty):
        """Reflect the new variable of ``ctx.ty``."""
        return self.reflect(ctx + (ty,), ty, s.NeVar(0))

    def reflect(self, ctx: tuple, ty: Ty, u):
        m = self.m
        match ty:
            case One():
                return VUnit()
            case Prod(a, b):
                return VPair(self.reflect(ctx, a, s.NePrj(1, u)), self.reflect(ctx, b, s.NePrj(2, u)))
            case Arr(a, b):
                def fn(tau, x):
                    return self.reflect(tau.target, b, s.NeApp(u.rename(tau), self.reify(tau.target, a, x)))

                return vfun(ctx, fn)
            case Atom():
                return VPos(m.ret(ctx, LNe(u)))
            case Zero():
                return VPos(m.abort(ctx, u))
            case Sum(a, b):
                return VPos(
                    m.case(
                        ctx,
                        u,
                        ty,
                        m.ret(ctx + (a,), LInl(self.fresh(ctx, a))),
                        m.ret(ctx + (b,), LInr(self.fresh(ctx, b))),
                    )
                )
        raise ShapeMismatch(f"cannot reflect at {ty!r}")

    def reify(self, ctx: tuple, ty: Ty, v):
        m = self.m
        match ty, v:
            case One(), VUnit():
                return s.NfUnit()
            case Prod(a, b), VPair(x, y):
                return s.NfPair(self.reify(ctx, a, x), self.reify(ctx, b, y))
            case Arr(a, b), VFun():
                ext = ctx + (a,)
                return s.NfAbs(a, self.reify(ext, b, v.apply(wk(ctx, a), self.fresh(ctx, a))))
            case Atom(), VPos(c):
                return m.run_nf(ctx, ty, m.map(ctx, c, lambda _, leaf: s.NfNe(leaf.ne)))
            case Zero(), VPos(c):
                return m.run_nf(ctx, ty, m.map(ctx, c, _magic))
            case Sum(a, b), VPos(c):
                def leaf(lctx, j):
                    match j:
                        case LInl(x):
                            return s.NfInj(1, b, self.reify(lctx, a, x))
                        case LInr(y):
                            return s.NfInj(2, a, self.reify(lctx, b, y))
                    raise ShapeMismatch(f"sum leaf {j!r}")

                return m.run_nf(ctx, ty, m.map(ctx, c, leaf))
        raise ShapeMismatch(f"value {v!r} does not inhabit {ty!r}")

    # -- weak pasting --------------------------------------------------------

    def run_sem(self, ctx: tuple, ty: Ty, c):
        """Push a cover of semantic values of type ``ty`` into ``⟦ty⟧``."""
        m = self.m
        match ty:
            case Atom() | Zero() | Sum():
                return VPos(m.join(ctx, m.map(ctx, c, lambda _, v: v.cover)))
            case One():
                return VUnit()
            case Prod(a, b):
                return VPair(
                    self.run_sem(ctx, a, m.map(ctx, c, lambda _, v: v.fst)),
                    self.run_sem(ctx, b, m.map(ctx, c, lambda _, v: v.snd)),
                )
            case Arr(_, b):
                def fn(tau, x):
                    delta = tau.target
                    moved = rename(tau, c)
                    applied = m.stmap(
                        delta, moved, lambda t2, f: f.apply(ope_id(t2.target), rename(t2, x))
                    )
                    return self.run_sem(delta, b, applied)

                return vfun(ctx, fn)
        raise ShapeMismatch(f"cannot run at {ty!r}")

    # -- evaluation ----------------------------------------------------------

    def eval(self, gctx: tuple, t, env: tuple, ctx: tuple):
        """Evaluate ``t : A ⊣ gctx`` in ``env : ⟦gctx⟧ ctx``.

        ``env`` is snoc-ordered like contexts: ``env[-1]`` interprets index 0.
        """
        m = self.m
        match t:
            case s.Var(x):
                return env[len(env) - 1 - x]
            case s.Abs(dom, body):
                return self._binder(gctx, dom, body, env, ctx)
            case s.App(f, a):
                return self.eval(gctx, f, env, ctx).apply(ope_id(ctx), self.eval(gctx, a, env, ctx))
            case s.Unit():
                return VUnit()
            case s.Pair(a, b):
                return VPair(self.eval(gctx, a, env, ctx), self.eval(gctx, b, env, ctx))
            case s.Prj(i, a):
                p = self.eval(gctx, a, env, ctx)
                return p.fst if i == 1 else p.snd
            case s.Inj(i, _, a):
                v = self.eval(gctx, a, env, ctx)
                return VPos(m.ret(ctx, LInl(v) if i == 1 else LInr(v)))
            case s.Case(scrut, left, right):
                sty = s.infer(gctx, scrut)
                res = s.infer(gctx + (sty.left,), left)
                c = self.eval(gctx, scrut, env, ctx).cover
                f1 = self._binder(gctx, sty.left, left, env, ctx)
                f2 = self._binder(gctx, sty.right, right, env, ctx)

                def branch(sigma, j):
                    match j:
                        case LInl(x):
                            return f1.apply(sigma, x)
                        case LInr(y):
                            return f2.apply(sigma, y)
                    raise ShapeMismatch(f"case on leaf {j!r}")

                return self.run_sem(ctx, res, m.stmap(ctx, c, branch))
            case s.Abort(res, a):
                c = self.eval(gctx, a, env, ctx).cover
                return self.run_sem(ctx, res, m.map(ctx, c, _magic))
        raise ShapeMismatch(f"cannot evaluate {t!r}")

    def _binder(self, gctx, dom, body, env, ctx):
        ext = gctx + (dom,)

        def fn(tau, x):
            return self.eval(ext, body, rename(tau, env) + (x,), tau.target)

        return vfun(ctx, fn)

    def id_env(self, ctx: tuple) -> tuple:
        env = ()
        for i, ty in enumerate(ctx):
            prefix = ctx[:i]
            env = rename(wk(prefix, ty), env) + (self.fresh(prefix, ty),)
        return env

    def norm(self, ctx: tuple, t):
        ctx = tuple(ctx)
        ty = s.infer(ctx, t)
        return self.reify(ctx, ty, self.eval(ctx, t, self.id_env(ctx), ctx))


def norm(ctx, t, monad=FREE):
    return Normalizer(monad).norm(ctx, t)


# -- admissible eliminations into arbitrary types ---------------------------


def abort_any(ctx: tuple, ty: Ty, u):
    """``abort^B u``: η-expand until a positive type is reached."""
    match ty:
        case One():
            return s.NfUnit()
        case Prod(a, b):
            return s.NfPair(abort_any(ctx, a, u), abort_any(ctx, b, u))
        case Arr(a, b):
            return s.NfAbs(a, abort_any(ctx + (a,), b, u.rename(wk(ctx, a))))
    return s.NfAbort(ty, u)


def case_any(ctx: tuple, ty: Ty, u, n1, n2):
    """``case^B u n1 n2`` with branches at ``ctx.A1`` and ``ctx.A2``."""
    match ty:
        case One():
            return s.NfUnit()
        case Prod(a, b):
            return s.NfPair(case_any(ctx, a, u, n1.fst, n2.fst), case_any(ctx, b, u, n1.snd, n2.snd))
        case Arr(a, b):
            # Branch bodies live under the case binder; move that binder past
            # the new lambda-bound variable.
            ext = ctx + (a,)
            b1 = _swap_under(n1.body, len(ctx))
            b2 = _swap_under(n2.body, len(ctx))
            return s.NfAbs(a, case_any(ext, b, u.rename(wk(ctx, a)), b1, b2))
    return s.NfCase(u, n1, n2)


def _swap_under(n, depth: int):
    # Exchange indices 0 and 1 (``Γ.Ai.A`` to ``Γ.A.Ai``); not an OPE, so it
    # goes through a raw index table.
    return n._ren((1, 0) + tuple(range(2, depth + 2)))
