"""Cover monads for the STLC: the free case-tree monad and continuations.

Both implementations offer the same services to the normalizer.  Leaf
transformers receive their context because reification needs it:

* ``map(ctx, c, f)`` calls ``f(leaf_ctx, j)``,
* ``stmap(ctx, c, l)`` calls ``l(sigma, j)`` with ``sigma : ctx ⊆ leaf_ctx``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..errors import PolarityViolation
from ..kernel import OPE, lift, ope_compose, ope_id, rename, weak, wk
from .syntax import Nf, NfAbort, NfCase, Sum, Ty


# -- the free cover monad ----------------------------------------------------


@dataclass(frozen=True)
class CovReturn:
    leaf: object

    def rename(self, tau: OPE):
        return CovReturn(rename(tau, self.leaf))


@dataclass(frozen=True)
class CovCase:
    scrut: object  # Ne of type ``ty``
    ty: Sum
    left: "Cover"
    right: "Cover"

    def rename(self, tau: OPE):
        return CovCase(
            self.scrut.rename(tau),
            self.ty,
            self.left.rename(lift(tau, self.ty.left)),
            self.right.rename(lift(tau, self.ty.right)),
        )


@dataclass(frozen=True)
class CovAbort:
    scrut: object  # Ne of type 0

    def rename(self, tau: OPE):
        return CovAbort(self.scrut.rename(tau))


Cover = CovReturn | CovCase | CovAbort


def cover_map(ctx: tuple, c: Cover, f: Callable) -> Cover:
    match c:
        case CovReturn(j):
            return CovReturn(f(ctx, j))
        case CovCase(u, ty, l, r):
            return CovCase(u, ty, cover_map(ctx + (ty.left,), l, f), cover_map(ctx + (ty.right,), r, f))
        case CovAbort():
            return c


def cover_stmap(sigma: OPE, c: Cover, l: Callable) -> Cover:
    """Strong map; ``sigma`` embeds the base context into the node context."""
    match c:
        case CovReturn(j):
            return CovReturn(l(sigma, j))
        case CovCase(u, ty, left, right):
            return CovCase(
                u,
                ty,
                cover_stmap(weak(sigma, ty.left), left, l),
                cover_stmap(weak(sigma, ty.right), right, l),
            )
        case CovAbort():
            return c


def cover_join(c: Cover) -> Cover:
    match c:
        case CovReturn(inner):
            return inner
        case CovCase(u, ty, l, r):
            return CovCase(u, ty, cover_join(l), cover_join(r))
        case CovAbort():
            return c


def cover_run_nf(c: Cover, ty: Ty) -> Nf:
    match c:
        case CovReturn(n):
            return n
        case CovCase(u, _, l, r):
            if not ty.positive:
                raise PolarityViolation(f"case split under negative type {ty}")
            return NfCase(u, cover_run_nf(l, ty), cover_run_nf(r, ty))
        case CovAbort(u):
            if not ty.positive:
                raise PolarityViolation(f"abort under negative type {ty}")
            return NfAbort(ty, u)


def cover_depth(c: Cover) -> int:
    match c:
        case CovCase(_, _, l, r):
            return 1 + max(cover_depth(l), cover_depth(r))
    return 0


class FreeCover:
    """Case trees with neutral scrutinees and arbitrary leaves."""

    name = "free"

    def ret(self, ctx, j):
        return CovReturn(j)

    def map(self, ctx, c, f):
        return cover_map(ctx, c, f)

    def stmap(self, ctx, c, l):
        return cover_stmap(ope_id(ctx), c, l)

    def join(self, ctx, c):
        return cover_join(c)

    def abort(self, ctx, u):
        return CovAbort(u)

    def case(self, ctx, u, ty, c1, c2):
        return CovCase(u, ty, c1, c2)

    def run_nf(self, ctx, ty, c):
        return cover_run_nf(c, ty)


# -- the continuation monad --------------------------------------------------


@dataclass(frozen=True, eq=False)
class CC:
    """``CC J Γ = ∀B. (J ⇒̂ Nf B) ⇒̂ Nf B`` as a Python callable.

    ``run(tau, answer_ty, k)`` with ``tau : Γ ⊆ Δ`` and
    ``k(tau2 : Δ ⊆ Φ, j) -> Nf answer_ty`` at Φ produces a normal form at Δ.
    """

    ctx: tuple
    run: Callable

    def rename(self, tau: OPE):
        run = self.run
        return CC(tau.target, lambda tau2, b, k: run(ope_compose(tau, tau2), b, k))


class Continuation:
    name = "cont"

    def ret(self, ctx, j):
        return CC(ctx, lambda tau, b, k: k(ope_id(tau.target), rename(tau, j)))

    def map(self, ctx, c, f):
        return CC(ctx, lambda tau, b, k: c.run(tau, b, lambda t2, j: k(t2, f(t2.target, j))))

    def stmap(self, ctx, c, l):
        return CC(
            ctx,
            lambda tau, b, k: c.run(tau, b, lambda t2, j: k(t2, l(ope_compose(tau, t2), j))),
        )

    def join(self, ctx, c):
        def run(tau, b, k):
            def outer(t2, inner):
                return inner.run(ope_id(t2.target), b, lambda t3, j: k(ope_compose(t2, t3), j))

            return c.run(tau, b, outer)

        return CC(ctx, run)

    def abort(self, ctx, u):
        return CC(ctx, lambda tau, b, k: NfAbort(b, u.rename(tau)))

    def case(self, ctx, u, ty, c1, c2):
        def run(tau, b, k):
            delta = tau.target
            branches = []
            for side, c in ((ty.left, c1), (ty.right, c2)):
                step = wk(delta, side)
                branches.append(
                    c.run(lift(tau, side), b, lambda t2, j, step=step: k(ope_compose(step, t2), j))
                )
            return NfCase(u.rename(tau), *branches)

        return CC(ctx, run)

    def run_nf(self, ctx, ty, c):
        return c.run(ope_id(ctx), ty, lambda tau, n: n)


FREE = FreeCover()
CONT = Continuation()
MONADS = {"free": FREE, "cont": CONT}
