"""Instances of the βηπ equational theory of the STLC with weak sums.

Each schema turns a seed into ``(ctx, lhs, rhs)`` with both sides of the
same type.  Metavariables are filled by the type-directed generator; the
context is biased to contain variables of the sum and empty types the
schema scrutinizes, so that the instance is not vacuous.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from ..errors import GenerationExhausted
from ..stlc import syntax as s
from .generate import StlcGen, _Fail, stlc_type

__all__ = ["SCHEMAS", "AxiomSchema", "gen_axiom_instance", "subst", "weaken"]


# -- substitution (test infrastructure only) ---------------------------------------


def weaken(t, ctx_len: int, by: int = 1, under: int = 0):
    """Shift the free indices ``>= under`` of ``t`` by ``by``."""
    table = tuple(range(under)) + tuple(i + by for i in range(under, under + ctx_len))
    return t._ren(table)


def subst(t, u, ctx_len: int, depth: int = 0):
    """``t[u]``: replace index ``depth`` of ``t`` by ``u`` and close the gap.

    ``t`` lives in ``ctx.A`` (plus ``depth`` binders), ``u`` in ``ctx`` of
    length ``ctx_len``.
    """
    match t:
        case s.Var(x):
            if x == depth:
                return weaken(u, ctx_len, depth)
            return s.Var(x - 1 if x > depth else x)
        case s.Abs(dom, body):
            return s.Abs(dom, subst(body, u, ctx_len, depth + 1))
        case s.App(f, a):
            return s.App(subst(f, u, ctx_len, depth), subst(a, u, ctx_len, depth))
        case s.Unit():
            return t
        case s.Pair(a, b):
            return s.Pair(subst(a, u, ctx_len, depth), subst(b, u, ctx_len, depth))
        case s.Prj(i, a):
            return s.Prj(i, subst(a, u, ctx_len, depth))
        case s.Inj(i, other, a):
            return s.Inj(i, other, subst(a, u, ctx_len, depth))
        case s.Case(scrut, l, r):
            return s.Case(
                subst(scrut, u, ctx_len, depth),
                subst(l, u, ctx_len, depth + 1),
                subst(r, u, ctx_len, depth + 1),
            )
        case s.Abort(res, a):
            return s.Abort(res, subst(a, u, ctx_len, depth))
    raise TypeError(f"not an STLC term: {t!r}")


# -- schemas ------------------------------------------------------------------------


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    rule: str
    build: Callable

    def instance(self, seed: int, size: int = 25, type_depth: int = 3):
        return gen_axiom_instance(self, seed, size, type_depth)


class _Inst:
    """Per-instance helpers: types, a biased context and sized subterms."""

    def __init__(self, rng: random.Random, size: int, type_depth: int):
        self.rng = rng
        self.size = size
        self.depth = type_depth
        self.gen = StlcGen(rng, type_depth, steps=6000)
        self.ctx: tuple = ()

    def ty(self, depth=None):
        d = max(0, min(self.depth, 2) if depth is None else depth)
        return stlc_type(self.rng, d, zero=0.0)

    def sum_ty(self):
        return s.Sum(self.ty(1), self.ty(1))

    def setup(self, *needed):
        extra = tuple(stlc_type(self.rng, 1, zero=0.0) for _ in range(self.rng.randint(0, 2)))
        ctx = list(extra) + list(needed)
        self.rng.shuffle(ctx)
        self.ctx = tuple(ctx)
        return self.ctx

    def budgets(self, parts: int):
        total = self.rng.randint(max(parts, self.size // 2), self.size)
        return self.gen.split(total, parts)

    def term(self, ctx, ty, n):
        return self.gen.term(ctx, ty, max(1, n))

    def empty_source(self):
        """A hypothesis from which a term of type 0 can be built."""
        return s.Zero() if self.rng.random() < 0.5 else s.Arr(self.ty(1), s.Zero())


def _beta_arr(k: _Inst):
    a, b = k.ty(), k.ty()
    ctx = k.setup()
    n1, n2 = k.budgets(2)
    t = k.term(ctx + (a,), b, n1 - 2)
    u = k.term(ctx, a, n2)
    return s.App(s.Abs(a, t), u), subst(t, u, len(ctx))


def _beta_prod(k: _Inst):
    a, b = k.ty(), k.ty()
    ctx = k.setup()
    n1, n2 = k.budgets(2)
    t1, t2 = k.term(ctx, a, n1 - 2), k.term(ctx, b, n2)
    i = k.rng.choice((1, 2))
    return s.Prj(i, s.Pair(t1, t2)), (t1 if i == 1 else t2)


def _beta_sum(k: _Inst):
    a, b, c = k.ty(), k.ty(), k.ty()
    ctx = k.setup()
    n0, n1, n2 = k.budgets(3)
    i = k.rng.choice((1, 2))
    t = k.term(ctx, a if i == 1 else b, n0 - 2)
    t1 = k.term(ctx + (a,), c, n1)
    t2 = k.term(ctx + (b,), c, n2)
    lhs = s.Case(s.Inj(i, b if i == 1 else a, t), t1, t2)
    return lhs, subst(t1 if i == 1 else t2, t, len(ctx))


def _eta_arr(k: _Inst):
    ty = s.Arr(k.ty(1), k.ty())
    ctx = k.setup(ty)
    (n,) = k.budgets(1)
    t = k.term(ctx, ty, n - 4)
    return t, s.Abs(ty.dom, s.App(weaken(t, len(ctx)), s.Var(0)))


def _eta_prod(k: _Inst):
    ty = s.Prod(k.ty(1), k.ty(1))
    ctx = k.setup(ty)
    (n,) = k.budgets(1)
    t = k.term(ctx, ty, (n - 3) // 2)
    return t, s.Pair(s.Prj(1, t), s.Prj(2, t))


def _eta_one(k: _Inst):
    ctx = k.setup()
    (n,) = k.budgets(1)
    return k.term(ctx, s.One(), n), s.Unit()


def _eta_sum(k: _Inst):
    ty = k.sum_ty()
    ctx = k.setup(ty)
    (n,) = k.budgets(1)
    t = k.term(ctx, ty, n - 5)
    return t, s.Case(t, s.Inj(1, ty.right, s.Var(0)), s.Inj(2, ty.left, s.Var(0)))


def _eta_zero(k: _Inst):
    ctx = k.setup(k.empty_source())
    (n,) = k.budgets(1)
    t = k.term(ctx, s.Zero(), n - 1)
    return t, s.Abort(s.Zero(), t)


def _pi_arr_zero(k: _Inst):
    a, b = k.ty(1), k.ty()
    ctx = k.setup(k.empty_source())
    n1, n2 = k.budgets(2)
    t = k.term(ctx, s.Zero(), n1 - 2)
    u = k.term(ctx, a, n2)
    return s.App(s.Abort(s.Arr(a, b), t), u), s.Abort(b, t)


def _pi_arr_sum(k: _Inst):
    sty = k.sum_ty()
    a, b = k.ty(1), k.ty()
    ctx = k.setup(sty)
    n0, n1, n2, n3 = k.budgets(4)
    fty = s.Arr(a, b)
    t = k.term(ctx, sty, n0 - 2)
    t1 = k.term(ctx + (sty.left,), fty, n1)
    t2 = k.term(ctx + (sty.right,), fty, n2)
    u = k.term(ctx, a, n3)
    u1 = weaken(u, len(ctx))
    return s.App(s.Case(t, t1, t2), u), s.Case(t, s.App(t1, u1), s.App(t2, u1))


def _pi_prod_zero(k: _Inst):
    a, b = k.ty(), k.ty()
    ctx = k.setup(k.empty_source())
    (n,) = k.budgets(1)
    t = k.term(ctx, s.Zero(), n - 2)
    i = k.rng.choice((1, 2))
    return s.Prj(i, s.Abort(s.Prod(a, b), t)), s.Abort(a if i == 1 else b, t)


def _pi_prod_sum(k: _Inst):
    sty = k.sum_ty()
    pty = s.Prod(k.ty(), k.ty())
    ctx = k.setup(sty)
    n0, n1, n2 = k.budgets(3)
    t = k.term(ctx, sty, n0 - 2)
    t1 = k.term(ctx + (sty.left,), pty, n1)
    t2 = k.term(ctx + (sty.right,), pty, n2)
    i = k.rng.choice((1, 2))
    return s.Prj(i, s.Case(t, t1, t2)), s.Case(t, s.Prj(i, t1), s.Prj(i, t2))


def _pi_sum_zero(k: _Inst):
    sty = k.sum_ty()
    c = k.ty()
    ctx = k.setup(k.empty_source())
    n0, n1, n2 = k.budgets(3)
    t = k.term(ctx, s.Zero(), n0 - 2)
    t1 = k.term(ctx + (sty.left,), c, n1)
    t2 = k.term(ctx + (sty.right,), c, n2)
    return s.Case(s.Abort(sty, t), t1, t2), s.Abort(c, t)


def _pi_sum_sum(k: _Inst):
    outer, inner = k.sum_ty(), k.sum_ty()
    e = k.ty()
    ctx = k.setup(outer)
    n0, n1, n2, n3, n4 = k.budgets(5)
    t = k.term(ctx, outer, n0 - 2)
    t1 = k.term(ctx + (outer.left,), inner, n1)
    t2 = k.term(ctx + (outer.right,), inner, n2)
    u1 = k.term(ctx + (inner.left,), e, n3)
    u2 = k.term(ctx + (inner.right,), e, n4)
    # ren (lift wk): the branches move under the outer case binder
    v1, v2 = weaken(u1, len(ctx), 1, 1), weaken(u2, len(ctx), 1, 1)
    lhs = s.Case(s.Case(t, t1, t2), u1, u2)
    rhs = s.Case(t, s.Case(t1, v1, v2), s.Case(t2, v1, v2))
    return lhs, rhs


def _pi_zero_zero(k: _Inst):
    res = k.ty()
    ctx = k.setup(k.empty_source())
    (n,) = k.budgets(1)
    t = k.term(ctx, s.Zero(), n - 2)
    return s.Abort(res, s.Abort(s.Zero(), t)), s.Abort(res, t)


def _pi_zero_sum(k: _Inst):
    sty = k.sum_ty()
    res = k.ty()
    ctx = k.setup(sty, k.empty_source())
    n0, n1, n2 = k.budgets(3)
    t = k.term(ctx, sty, n0 - 2)
    t1 = k.term(ctx + (sty.left,), s.Zero(), n1)
    t2 = k.term(ctx + (sty.right,), s.Zero(), n2)
    return s.Abort(res, s.Case(t, t1, t2)), s.Case(t, s.Abort(res, t1), s.Abort(res, t2))


SCHEMAS: dict[str, AxiomSchema] = {
    sch.name: sch
    for sch in [
        AxiomSchema("beta_arr", "app (abs t) u = t[u]", _beta_arr),
        AxiomSchema("beta_prod", "prj_i (pair t1 t2) = t_i", _beta_prod),
        AxiomSchema("beta_sum", "case (inj_i t) t1 t2 = t_i[t]", _beta_sum),
        AxiomSchema("eta_arr", "t = abs (app (ren wk t) v0)", _eta_arr),
        AxiomSchema("eta_prod", "t = pair (prj_1 t) (prj_2 t)", _eta_prod),
        AxiomSchema("eta_one", "t = unit", _eta_one),
        AxiomSchema("eta_sum", "t = case t (inj_1 v0) (inj_2 v0)", _eta_sum),
        AxiomSchema("eta_zero", "t = abort t", _eta_zero),
        AxiomSchema("pi_arr_zero", "app (abort t) u = abort t", _pi_arr_zero),
        AxiomSchema("pi_arr_sum", "app (case t t1 t2) u = case t (app t1 (ren wk u)) (app t2 (ren wk u))", _pi_arr_sum),
        AxiomSchema("pi_prod_zero", "prj_i (abort t) = abort t", _pi_prod_zero),
        AxiomSchema("pi_prod_sum", "prj_i (case t t1 t2) = case t (prj_i t1) (prj_i t2)", _pi_prod_sum),
        AxiomSchema("pi_sum_zero", "case (abort t) t1 t2 = abort t", _pi_sum_zero),
        AxiomSchema("pi_sum_sum", "case (case t t1 t2) u1 u2 = case t (case t1 u1' u2') (case t2 u1' u2')", _pi_sum_sum),
        AxiomSchema("pi_zero_zero", "abort (abort t) = abort t", _pi_zero_zero),
        AxiomSchema("pi_zero_sum", "abort (case t t1 t2) = case t (abort t1) (abort t2)", _pi_zero_sum),
    ]
}


def gen_axiom_instance(schema, seed: int, size: int = 25, type_depth: int = 3, attempts: int = 200):
    """``(ctx, lhs, rhs)`` for ``schema`` (an :class:`AxiomSchema` or its name)."""
    if isinstance(schema, str):
        schema = SCHEMAS[schema]
    master = random.Random(f"{schema.name}:{seed}")
    for _ in range(attempts):
        k = _Inst(random.Random(master.getrandbits(32)), size, type_depth)
        try:
            lhs, rhs = schema.build(k)
        except (_Fail, RecursionError):
            continue
        if s.term_size(lhs) > size or s.infer(k.ctx, lhs) != s.infer(k.ctx, rhs):
            continue
        return k.ctx, lhs, rhs
    raise GenerationExhausted(f"no instance of {schema.name} for seed {seed}")
