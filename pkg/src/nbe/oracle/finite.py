"""The standard set model, made finite.

Every atom denotes ``{0, ..., base_size-1}``.  Shifts (``U``/``F``) and
polarity are invisible; ``&`` and ``×`` both denote cartesian products.
Values are canonical so that plain ``==`` is semantic equality:

* atoms are ints, the unit is ``()``, pairs are 2-tuples,
* injections are :class:`FInj`,
* functions are :class:`FFun` tables listing the result for every element
  of the domain, in the order produced by :func:`enumerate_type`.

Nothing here depends on the normalizers.
"""

from __future__ import annotations

import dataclasses
import itertools
from dataclasses import dataclass
from functools import lru_cache

from ..cbpv import syntax as c
from ..errors import DomainTooLarge, TypeMismatch
from ..polarized import syntax as z
from ..stlc import syntax as s

DEFAULT_BOUND = 10**6
_CAP = 2**64

CALCULI = ("stlc", "cbpv", "polarized")


@dataclass(frozen=True)
class FInj:
    i: int
    val: object


@dataclass(frozen=True)
class FFun:
    dom: tuple  # shape of the domain
    table: tuple


# -- shapes: the type structure the model can see ---------------------------------


def shape(ty) -> tuple:
    match ty:
        case s.Atom() | c.AtomP() | c.AtomN():
            return ("o",)
        case s.Zero() | c.ZeroP():
            return ("0",)
        case s.One() | c.OneP() | c.Top():
            return ("1",)
        case s.Sum(a, b) | c.SumP(a, b):
            return ("+", shape(a), shape(b))
        case s.Prod(a, b) | c.ProdP(a, b) | c.With(a, b):
            return ("*", shape(a), shape(b))
        case s.Arr(a, b) | c.Arr(a, b):
            return ("->", shape(a), shape(b))
        case c.Thunk(a) | c.Comp(a):
            return shape(a)
    raise TypeMismatch(f"not a type: {ty!r}")


def cardinality(sh: tuple, base: int) -> int:
    match sh:
        case ("o",):
            return base
        case ("0",):
            return 0
        case ("1",):
            return 1
        case ("+", a, b):
            return min(cardinality(a, base) + cardinality(b, base), _CAP)
        case ("*", a, b):
            return min(cardinality(a, base) * cardinality(b, base), _CAP)
        case ("->", a, b):
            na, nb = cardinality(a, base), cardinality(b, base)
            if nb <= 1 or na == 0:
                return nb**na
            # saturate instead of building astronomically large ints
            return _CAP if na >= 64 else min(nb**na, _CAP)
    raise TypeMismatch(f"bad shape {sh!r}")


@lru_cache(maxsize=None)
def enumerate_shape(sh: tuple, base: int, bound: int = DEFAULT_BOUND) -> tuple:
    n = cardinality(sh, base)
    if n > bound:
        raise DomainTooLarge(f"the type {render_shape(sh)} has {n} elements at base size {base}")
    match sh:
        case ("o",):
            return tuple(range(base))
        case ("0",):
            return ()
        case ("1",):
            return ((),)
        case ("+", a, b):
            return tuple(FInj(1, x) for x in enumerate_shape(a, base, bound)) + tuple(
                FInj(2, y) for y in enumerate_shape(b, base, bound)
            )
        case ("*", a, b):
            return tuple(itertools.product(enumerate_shape(a, base, bound), enumerate_shape(b, base, bound)))
        case ("->", a, b):
            dom = enumerate_shape(a, base, bound)
            cod = enumerate_shape(b, base, bound)
            return tuple(FFun(a, tbl) for tbl in itertools.product(cod, repeat=len(dom)))
    raise TypeMismatch(f"bad shape {sh!r}")


def enumerate_type(ty, base: int = 2, bound: int = DEFAULT_BOUND) -> tuple:
    return enumerate_shape(shape(ty), base, bound)


@lru_cache(maxsize=None)
def _index(sh: tuple, base: int, bound: int) -> dict:
    return {v: i for i, v in enumerate(enumerate_shape(sh, base, bound))}


def render_shape(sh: tuple) -> str:
    match sh:
        case (atom,):
            return atom
        case (op, a, b):
            return f"({render_shape(a)} {op} {render_shape(b)})"
    return repr(sh)


class _Model:
    def __init__(self, base: int, bound: int):
        if not 1 <= base <= 4:
            raise ValueError("base_size must lie between 1 and 4")
        self.base = base
        self.bound = bound
        self.memo: dict = {}
        self._fv: dict = {}

    def domain(self, ty) -> tuple:
        return enumerate_type(ty, self.base, self.bound)

    def tabulate(self, dom_ty, body) -> FFun:
        sh = shape(dom_ty)
        return FFun(sh, tuple(body(d) for d in enumerate_shape(sh, self.base, self.bound)))

    def closure(self, t, env, dom_ty, body) -> FFun:
        """Tabulate the lambda ``t``, reusing the table when the variables it
        mentions have the same values as before (cleared per environment)."""
        fv = self._fv.get(id(t))
        if fv is None:
            fv = self._fv[id(t)] = tuple(sorted(free_vars(t)))
        key = (id(t), tuple(_at(env, x) for x in fv))
        hit = self.memo.get(key)
        if hit is None:
            hit = self.memo[key] = self.tabulate(dom_ty, body)
        return hit

    def apply(self, f: FFun, a):
        return f.table[_index(f.dom, self.base, self.bound)[a]]


def _at(env, x):
    return env[len(env) - 1 - x]


# -- STLC ---------------------------------------------------------------------------


def _eval_stlc(m: _Model, t, env: tuple):
    match t:
        case s.Var(x):
            return _at(env, x)
        case s.Abs(dom, body):
            return m.closure(t, env, dom, lambda d: _eval_stlc(m, body, env + (d,)))
        case s.App(f, a):
            return m.apply(_eval_stlc(m, f, env), _eval_stlc(m, a, env))
        case s.Unit():
            return ()
        case s.Pair(a, b):
            return (_eval_stlc(m, a, env), _eval_stlc(m, b, env))
        case s.Prj(i, a):
            return _eval_stlc(m, a, env)[i - 1]
        case s.Inj(i, _, a):
            return FInj(i, _eval_stlc(m, a, env))
        case s.Case(scrut, l, r):
            v = _eval_stlc(m, scrut, env)
            return _eval_stlc(m, l if v.i == 1 else r, env + (v.val,))
        case s.Abort():
            raise TypeMismatch("the empty type has no elements")
    raise TypeMismatch(f"not an STLC term: {t!r}")


# -- CBPV ---------------------------------------------------------------------------


def _eval_cbpv(m: _Model, t, env: tuple):
    match t:
        case c.Var(x):
            return _at(env, x)
        case c.ThunkV(body) | c.Force(body):
            return _eval_cbpv(m, body, env)
        case c.UnitP() | c.UnitN():
            return ()
        case c.PairP(a, b) | c.PairN(a, b):
            return (_eval_cbpv(m, a, env), _eval_cbpv(m, b, env))
        case c.Inj(i, _, a):
            return FInj(i, _eval_cbpv(m, a, env))
        case c.Ret(v):
            return _eval_cbpv(m, v, env)
        case c.Abs(dom, body):
            return m.closure(t, env, dom, lambda d: _eval_cbpv(m, body, env + (d,)))
        case c.App(f, a):
            return m.apply(_eval_cbpv(m, f, env), _eval_cbpv(m, a, env))
        case c.Prj(i, a):
            return _eval_cbpv(m, a, env)[i - 1]
        case c.Bind(_, comp, body):
            return _eval_cbpv(m, body, env + (_eval_cbpv(m, comp, env),))
        case c.Split(v, body):
            a, b = _eval_cbpv(m, v, env)
            return _eval_cbpv(m, body, env + (a, b))
        case c.Case(v, l, r):
            inj = _eval_cbpv(m, v, env)
            return _eval_cbpv(m, l if inj.i == 1 else r, env + (inj.val,))
        case c.Abort():
            raise TypeMismatch("the empty type has no elements")
    raise TypeMismatch(f"not a CBPV term: {t!r}")


# -- polarized ---------------------------------------------------------------------


def _select(a, tree, env: tuple):
    """Walk ``tree`` guided by ``a``; return the selected leaf and bindings."""
    match tree:
        case z.HypP(_, leaf) | z.HypN(_, leaf):
            return leaf, env + (a,)
        case z.Split0(leaf):
            return leaf, env
        case z.Split2(inner):
            first, env = _select(a[0], inner, env)
            return _select(a[1], first, env)
        case z.Branch2(left, right):
            return _select(a.val, left if a.i == 1 else right, env)
        case z.Branch0():
            raise TypeMismatch("the empty type has no elements")
    raise TypeMismatch(f"not a pattern tree: {tree!r}")


def _eval_pol(m: _Model, t, env: tuple):
    match t:
        case c.Var(x) | z.VarN(x):
            return _at(env, x)
        case c.ThunkV(body) | c.Force(body) | c.Ret(body):
            return _eval_pol(m, body, env)
        case c.UnitP() | c.UnitN():
            return ()
        case c.PairP(a, b) | c.PairN(a, b):
            return (_eval_pol(m, a, env), _eval_pol(m, b, env))
        case c.Inj(i, _, a):
            return FInj(i, _eval_pol(m, a, env))
        case z.Abs(dom, tree, _):
            def body(d):
                leaf, env2 = _select(d, tree, env)
                return _eval_pol(m, leaf, env2)

            return m.closure(t, env, dom, body)
        case c.App(f, a):
            return m.apply(_eval_pol(m, f, env), _eval_pol(m, a, env))
        case c.Prj(i, a):
            return _eval_pol(m, a, env)[i - 1]
        case z.Bind(comp, tree, _):
            leaf, env2 = _select(_eval_pol(m, comp, env), tree, env)
            return _eval_pol(m, leaf, env2)
    raise TypeMismatch(f"not a polarized term: {t!r}")


_EVAL = {"stlc": _eval_stlc, "cbpv": _eval_cbpv, "polarized": _eval_pol}


def _infer(calculus, ctx, t):
    if calculus == "stlc":
        return s.infer(ctx, t)
    if calculus == "cbpv":
        return c.infer_tm(ctx, t)
    if calculus == "polarized":
        return z.infer_tm(ctx, t)
    raise ValueError(f"unknown calculus {calculus!r}")


def fin_eval(calculus: str, ctx, t, base_size: int = 2, env=(), bound: int = DEFAULT_BOUND):
    """The value of ``t`` in the finite model under ``env`` (snoc-ordered)."""
    ctx = tuple(ctx)
    _infer(calculus, ctx, t)
    if len(env) != len(ctx):
        raise TypeMismatch(f"environment of length {len(env)} for a context of length {len(ctx)}")
    return _EVAL[calculus](_Model(base_size, bound), t, tuple(env))


def enum_envs(ctx, base_size: int = 2, bound: int = DEFAULT_BOUND):
    """Every environment for ``ctx``, each exactly once."""
    domains = [enumerate_type(ty, base_size, bound) for ty in ctx]
    total = 1
    for d in domains:
        total *= len(d)
    if total > bound:
        raise DomainTooLarge(f"{total} environments exceed the bound {bound}")
    return itertools.product(*domains)


def env_count(ctx, base_size: int = 2) -> int:
    total = 1
    for ty in ctx:
        total *= cardinality(shape(ty), base_size)
    return total


# -- free variables -------------------------------------------------------------------


def free_vars(t, depth: int = 0, out: set | None = None) -> set:
    """Indices of the free variables of a term of any of the three calculi."""
    out = set() if out is None else out
    match t:
        case s.Var(x) | c.Var(x) | z.VarN(x):
            if x >= depth:
                out.add(x - depth)
        case s.Abs(_, body) | c.Abs(_, body):
            free_vars(body, depth + 1, out)
        case s.Case(scrut, l, r) | c.Case(scrut, l, r):
            free_vars(scrut, depth, out)
            free_vars(l, depth + 1, out)
            free_vars(r, depth + 1, out)
        case c.Bind(_, comp, body):
            free_vars(comp, depth, out)
            free_vars(body, depth + 1, out)
        case c.Split(v, body):
            free_vars(v, depth, out)
            free_vars(body, depth + 2, out)
        case z.Abs(_, tree, _):
            _tree_vars(tree, depth, out, free_vars)
        case z.Bind(comp, tree, _):
            free_vars(comp, depth, out)
            _tree_vars(tree, depth, out, free_vars)
        case _:
            for f in dataclasses.fields(t):
                child = getattr(t, f.name)
                if isinstance(child, (s.Syntax, c.Syntax)):
                    free_vars(child, depth, out)
    return out


def _tree_vars(a, depth, out, leaf):
    match a:
        case z.HypP(_, j) | z.HypN(_, j):
            leaf(j, depth + 1, out)
        case z.Split0(j):
            leaf(j, depth, out)
        case z.Split2(inner):
            _tree_vars(inner, depth, out, lambda j, d, o: _tree_vars(j, d, o, leaf))
        case z.Branch2(l, r):
            _tree_vars(l, depth, out, leaf)
            _tree_vars(r, depth, out, leaf)


def _witness(sh: tuple, base: int, bound: int):
    """Some element of the shape, or ``None`` if it is empty."""
    match sh:
        case ("o",):
            return 0
        case ("0",):
            return None
        case ("1",):
            return ()
        case ("+", a, b):
            w = _witness(a, base, bound)
            if w is not None:
                return FInj(1, w)
            w = _witness(b, base, bound)
            return None if w is None else FInj(2, w)
        case ("*", a, b):
            wa, wb = _witness(a, base, bound), _witness(b, base, bound)
            return None if wa is None or wb is None else (wa, wb)
        case ("->", a, b):
            n = len(enumerate_shape(a, base, bound))
            wb = _witness(b, base, bound)
            if n and wb is None:
                return None
            return FFun(a, (wb,) * n)
    raise TypeMismatch(f"bad shape {sh!r}")


def oracle_equiv(calculus: str, ctx, t1, t2, base_size: int = 2, bound: int = DEFAULT_BOUND) -> bool:
    """Do ``t1`` and ``t2`` denote the same function of their free variables?

    Only the variables that occur in either term are enumerated; the others
    are fixed to an arbitrary element, since the denotations cannot depend
    on them.  An uninhabited context makes any two terms equal.
    """
    ctx = tuple(ctx)
    ty1, ty2 = _infer(calculus, ctx, t1), _infer(calculus, ctx, t2)
    if ty1 != ty2:
        raise TypeMismatch(f"terms have different types {ty1} and {ty2}")
    used = free_vars(t1) | free_vars(t2)
    n = len(ctx)
    fixed = {}
    for x in range(n):
        if x not in used:
            w = _witness(shape(ctx[n - 1 - x]), base_size, bound)
            if w is None:
                return True
            fixed[x] = w
    relevant = tuple(ctx[n - 1 - x] for x in sorted(used, reverse=True))
    m = _Model(base_size, bound)
    ev = _EVAL[calculus]
    for vals in enum_envs(relevant, base_size, bound):
        it = iter(vals)
        env = tuple(fixed[x] if x in fixed else next(it) for x in reversed(range(n)))
        m.memo.clear()
        if ev(m, t1, env) != ev(m, t2, env):
            return False
    return True
