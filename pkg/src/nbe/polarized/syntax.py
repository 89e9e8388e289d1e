"""The focused (polarized) calculus: pattern trees, terms and normal forms.

Types are shared with CBPV.  Contexts hold only hypotheses: an entry is
either a positive atom (:class:`~nbe.cbpv.syntax.AtomP`) or a negative type.
Positive hypotheses are broken apart by :class:`Add` trees, so terms have no
positive eliminations.

Constructors that coincide with CBPV (values, ``ret``, ``force``, ``app``,
projections, negative pairs and unit, value normal forms) are reused from
:mod:`nbe.cbpv.syntax`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

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
    Syntax,
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
from ..errors import (
    BranchTypeDisagreement,
    InvalidNormalForm,
    PolarityViolation,
    TypeMismatch,
    UnboundVariable,
)
from ..kernel import OPE, lift, lift_table, rename, weak

__all__ = [
    "HypP", "HypN", "Branch0", "Branch2", "Split0", "Split2",
    "CovReturn", "CovBind", "VarN", "Abs", "Bind", "NeVar", "NfAbs",
    "add_map", "add_stmap", "add_leaves", "check_add", "is_hyp",
    "infer_val", "infer_tm", "check_ctx", "check_nf", "check_ne", "check_vnf",
    "erase", "term_size",
]


def is_hyp(ty) -> bool:
    return isinstance(ty, (AtomP, TyN))


# -- the pattern-matching functor Add P ----------------------------------------
#
# Nodes remember the hypotheses they introduce so that renaming along an OPE
# can lift past them.  Leaves are arbitrary; ``Split2`` holds an Add tree
# whose leaves are again Add trees (for the second component).


class _Add:
    def rename(self, tau: OPE):
        return self._map_ope(tau)


@dataclass(frozen=True)
class HypP(_Add):
    ty: AtomP
    body: object

    def _map_ope(self, tau):
        return HypP(self.ty, rename(lift(tau, self.ty), self.body))

    def _ren(self, t):
        return HypP(self.ty, self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class HypN(_Add):
    ty: TyN
    body: object

    def _map_ope(self, tau):
        return HypN(self.ty, rename(lift(tau, self.ty), self.body))

    def _ren(self, t):
        return HypN(self.ty, self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class Branch0(_Add):
    def _map_ope(self, tau):
        return self

    def _ren(self, t):
        return self


@dataclass(frozen=True)
class Branch2(_Add):
    left: _Add
    right: _Add

    def _map_ope(self, tau):
        return Branch2(self.left.rename(tau), self.right.rename(tau))

    def _ren(self, t):
        return Branch2(self.left._ren(t), self.right._ren(t))


@dataclass(frozen=True)
class Split0(_Add):
    body: object

    def _map_ope(self, tau):
        return Split0(rename(tau, self.body))

    def _ren(self, t):
        return Split0(self.body._ren(t))


@dataclass(frozen=True)
class Split2(_Add):
    inner: _Add

    def _map_ope(self, tau):
        return Split2(self.inner.rename(tau))

    def _ren(self, t):
        return Split2(self.inner._ren(t))


Add = HypP | HypN | Branch0 | Branch2 | Split0 | Split2


def add_stmap(sigma: OPE, a, l: Callable):
    """Strong map: ``l(sigma', j)`` with ``sigma'`` reaching the leaf context."""
    match a:
        case HypP(ty, j):
            return HypP(ty, l(weak(sigma, ty), j))
        case HypN(ty, j):
            return HypN(ty, l(weak(sigma, ty), j))
        case Branch0():
            return a
        case Branch2(x, y):
            return Branch2(add_stmap(sigma, x, l), add_stmap(sigma, y, l))
        case Split0(j):
            return Split0(l(sigma, j))
        case Split2(e):
            return Split2(add_stmap(sigma, e, lambda s2, inner: add_stmap(s2, inner, l)))
    raise TypeError(f"not a pattern tree: {a!r}")


def add_map(ctx: tuple, a, f: Callable):
    """``f(leaf_ctx, j)`` for every leaf."""
    match a:
        case HypP(ty, j) | HypN(ty, j):
            return type(a)(ty, f(ctx + (ty,), j))
        case Branch0():
            return a
        case Branch2(x, y):
            return Branch2(add_map(ctx, x, f), add_map(ctx, y, f))
        case Split0(j):
            return Split0(f(ctx, j))
        case Split2(e):
            return Split2(add_map(ctx, e, lambda c, inner: add_map(c, inner, f)))
    raise TypeError(f"not a pattern tree: {a!r}")


def add_leaves(ctx: tuple, a):
    """Yield ``(leaf_ctx, leaf)`` pairs, left to right."""
    match a:
        case HypP(ty, j) | HypN(ty, j):
            yield ctx + (ty,), j
        case Branch2(x, y):
            yield from add_leaves(ctx, x)
            yield from add_leaves(ctx, y)
        case Split0(j):
            yield ctx, j
        case Split2(e):
            for c, inner in add_leaves(ctx, e):
                yield from add_leaves(c, inner)


def check_add(ctx: tuple, ty, a, leaf: Callable) -> None:
    """Check that ``a`` decomposes exactly ``ty``; ``leaf(ctx, j)`` checks leaves."""
    match ty, a:
        case AtomP(), HypP(hty, j) if hty == ty:
            leaf(ctx + (ty,), j)
        case Thunk(n), HypN(hty, j) if hty == n:
            leaf(ctx + (n,), j)
        case ZeroP(), Branch0():
            pass
        case SumP(p1, p2), Branch2(x, y):
            check_add(ctx, p1, x, leaf)
            check_add(ctx, p2, y, leaf)
        case OneP(), Split0(j):
            leaf(ctx, j)
        case ProdP(p1, p2), Split2(e):
            check_add(ctx, p1, e, lambda c, inner: check_add(c, p2, inner, leaf))
        case _:
            raise InvalidNormalForm(f"pattern tree {type(a).__name__} does not decompose {ty}")


# -- the slim cover monad ----------------------------------------------------------


@dataclass(frozen=True)
class CovReturn:
    leaf: object

    def rename(self, tau):
        return CovReturn(rename(tau, self.leaf))

    def _ren(self, t):
        return CovReturn(self.leaf._ren(t))


@dataclass(frozen=True)
class CovBind:
    ne: object
    ty: object  # the positive type P of ``ne : Comp P``
    body: _Add  # Add P (Cov J)

    def rename(self, tau):
        return CovBind(self.ne.rename(tau), self.ty, self.body.rename(tau))

    def _ren(self, t):
        return CovBind(self.ne._ren(t), self.ty, self.body._ren(t))


Cov = CovReturn | CovBind


# -- terms -------------------------------------------------------------------------


@dataclass(frozen=True)
class VarN(Syntax):
    """A negative hypothesis used as a term."""

    index: int

    def _ren(self, t):
        return VarN(t[self.index])


@dataclass(frozen=True)
class Abs(Syntax):
    """``cod`` is only needed when the pattern tree has no leaves."""

    dom: object
    body: _Add
    cod: object = None

    def _ren(self, t):
        return Abs(self.dom, self.body._ren(t), self.cod)


@dataclass(frozen=True)
class Bind(Syntax):
    comp: object
    body: _Add
    cod: object = None

    def _ren(self, t):
        return Bind(self.comp._ren(t), self.body._ren(t), self.cod)


# -- neutrals and normal forms -----------------------------------------------------


@dataclass(frozen=True)
class NeVar(Syntax):
    index: int

    def _ren(self, t):
        return NeVar(t[self.index])


@dataclass(frozen=True)
class NfAbs(Syntax):
    dom: object
    body: _Add

    def _ren(self, t):
        return NfAbs(self.dom, self.body._ren(t))


# -- typing ------------------------------------------------------------------------


def _lookup(ctx, x):
    if not isinstance(x, int) or not 0 <= x < len(ctx):
        raise UnboundVariable(f"index {x} is unbound in a context of length {len(ctx)}")
    return ctx[len(ctx) - 1 - x]


def _expect(ty, cls, what):
    if not isinstance(ty, cls):
        raise TypeMismatch(f"{what}: expected {cls.__name__}, got {ty}")
    return ty


def check_ctx(ctx) -> tuple:
    ctx = tuple(ctx)
    for ty in ctx:
        if not is_hyp(ty):
            raise PolarityViolation(f"{ty} cannot be a hypothesis; only positive atoms and negative types can")
    return ctx


def infer_val(ctx: tuple, v):
    match v:
        case Var(x):
            return _expect(_lookup(ctx, x), AtomP, "positive variable")
        case ThunkV(t):
            return Thunk(infer_tm(ctx, t))
        case UnitP():
            return OneP()
        case PairP(a, b):
            return ProdP(infer_val(ctx, a), infer_val(ctx, b))
        case Inj(i, other, a):
            aty = infer_val(ctx, a)
            return SumP(aty, other) if i == 1 else SumP(other, aty)
    raise TypeMismatch(f"not a polarized value: {v!r}")


def infer_add(ctx: tuple, ty, a, cod=None):
    """Result type of a pattern tree of terms.

    ``cod`` is the declared result, if any; it is required for trees
    without leaves.
    """
    found = [cod] if cod is not None else []

    def leaf(lctx, t):
        found.append(infer_tm(lctx, t))

    try:
        check_add(ctx, ty, a, leaf)
    except InvalidNormalForm as exc:
        raise TypeMismatch(str(exc)) from None
    for other in found[1:]:
        if other != found[0]:
            raise BranchTypeDisagreement(f"pattern branches have types {found[0]} and {other}")
    if not found:
        raise TypeMismatch(f"a match on {ty} without branches needs a result annotation")
    return found[0]


def infer_tm(ctx: tuple, t):
    match t:
        case VarN(x):
            return _expect(_lookup(ctx, x), TyN, "negative variable")
        case Ret(v):
            return Comp(infer_val(ctx, v))
        case Abs(dom, body, cod):
            return Arr(dom, infer_add(ctx, dom, body, cod))
        case PairN(a, b):
            return With(infer_tm(ctx, a), infer_tm(ctx, b))
        case UnitN():
            return Top()
        case Force(v):
            return _expect(infer_val(ctx, v), Thunk, "force").neg
        case App(f, a):
            fty = _expect(infer_tm(ctx, f), Arr, "application")
            aty = infer_val(ctx, a)
            if aty != fty.dom:
                raise TypeMismatch(f"argument has type {aty}, function expects {fty.dom}")
            return fty.cod
        case Prj(i, a):
            wty = _expect(infer_tm(ctx, a), With, "projection")
            return wty.left if i == 1 else wty.right
        case Bind(c, body, cod):
            cty = _expect(infer_tm(ctx, c), Comp, "bind")
            return infer_add(ctx, cty.pos, body, cod)
    raise TypeMismatch(f"not a polarized term: {t!r}")


def term_size(t) -> int:
    match t:
        case Var() | VarN() | UnitP() | UnitN():
            return 1
        case ThunkV(a) | Ret(a) | Force(a) | Prj(_, a) | Inj(_, _, a):
            return 1 + term_size(a)
        case PairP(a, b) | PairN(a, b) | App(a, b):
            return 1 + term_size(a) + term_size(b)
        case Abs(_, body, _):
            return 1 + sum(term_size(j) for _, j in add_leaves((), body))
        case Bind(c, body, _):
            return 1 + term_size(c) + sum(term_size(j) for _, j in add_leaves((), body))
    raise TypeError(f"not a polarized term: {t!r}")


# -- erasure back into terms -------------------------------------------------------


def erase_vnf(ty, v, ctx: tuple = ()):
    match ty, v:
        case AtomP(), VnfVar(x):
            return Var(x)
        case Thunk(n), VnfThunk(nf):
            return ThunkV(erase_nf(n, nf, ctx))
        case OneP(), VnfUnit():
            return UnitP()
        case ProdP(a, b), VnfPair(x, y):
            return PairP(erase_vnf(a, x, ctx), erase_vnf(b, y, ctx))
        case SumP(a, b), VnfInj(1, x):
            return Inj(1, b, erase_vnf(a, x, ctx))
        case SumP(a, b), VnfInj(2, y):
            return Inj(2, a, erase_vnf(b, y, ctx))
    raise InvalidNormalForm(f"value normal form {v!r} at {ty!r}")


def erase_ne(ctx: tuple, u):
    """Return the erased neutral and its type."""
    match u:
        case NeVar(x):
            return VarN(x), _lookup(ctx, x)
        case NePrj(i, a):
            t, ty = erase_ne(ctx, a)
            return Prj(i, t), (ty.left if i == 1 else ty.right)
        case NeApp(f, a):
            t, ty = erase_ne(ctx, f)
            return App(t, erase_vnf(ty.dom, a, ctx)), ty.cod
    raise InvalidNormalForm(f"not a neutral: {u!r}")


def leafless(a) -> bool:
    return next(add_leaves((), a), None) is None


def _erase_cov(ctx: tuple, c, leaf, res):
    match c:
        case CovReturn(j):
            return leaf(ctx, j)
        case CovBind(u, _, body):
            t, _ = erase_ne(ctx, u)
            tree = add_map(ctx, body, lambda lctx, k: _erase_cov(lctx, k, leaf, res))
            return Bind(t, tree, res if leafless(tree) else None)
    raise InvalidNormalForm(f"not a cover: {c!r}")


def erase_nf(ty, n, ctx: tuple = ()):
    match ty, n:
        case AtomN(), NfNe(c):
            return _erase_cov(ctx, c, lambda lctx, u: erase_ne(lctx, u)[0], ty)
        case Comp(p), NfRet(c):
            return _erase_cov(ctx, c, lambda lctx, v: Ret(erase_vnf(p, v, lctx)), ty)
        case Top(), NfUnit():
            return UnitN()
        case With(a, b), NfPair(x, y):
            return PairN(erase_nf(a, x, ctx), erase_nf(b, y, ctx))
        case Arr(p, m), NfAbs(dom, body):
            tree = add_map(ctx, body, lambda lctx, j: erase_nf(m, j, lctx))
            return Abs(dom, tree, m if leafless(tree) else None)
    raise InvalidNormalForm(f"normal form {n!r} at {ty!r}")


def erase(ctx: tuple, ty, n):
    return erase_nf(ty, n, tuple(ctx))


# -- grammar validation ------------------------------------------------------------


def _bad(msg):
    raise InvalidNormalForm(msg)


def _entry(ctx, x):
    if not isinstance(x, int) or not 0 <= x < len(ctx):
        _bad(f"unbound index {x}")
    return ctx[len(ctx) - 1 - x]


def check_vnf(ctx: tuple, ty, v) -> None:
    match v:
        case VnfVar(x):
            if not isinstance(ty, AtomP) or _entry(ctx, x) != ty:
                _bad(f"value variable {x} at {ty}")
        case VnfThunk(nf):
            if not isinstance(ty, Thunk):
                _bad(f"thunk at {ty}")
            check_nf(ctx, ty.neg, nf)
        case VnfUnit():
            if not isinstance(ty, OneP):
                _bad(f"unit at {ty}")
        case VnfPair(a, b):
            if not isinstance(ty, ProdP):
                _bad(f"pair at {ty}")
            check_vnf(ctx, ty.left, a)
            check_vnf(ctx, ty.right, b)
        case VnfInj(i, a):
            if not isinstance(ty, SumP) or i not in (1, 2):
                _bad(f"injection at {ty}")
            check_vnf(ctx, ty.left if i == 1 else ty.right, a)
        case _:
            _bad(f"not a value normal form: {v!r}")


def check_ne(ctx: tuple, u):
    match u:
        case NeVar(x):
            ty = _entry(ctx, x)
            if not isinstance(ty, TyN):
                _bad(f"neutral rooted at a hypothesis of type {ty}")
            return ty
        case NePrj(i, a):
            ty = check_ne(ctx, a)
            if not isinstance(ty, With) or i not in (1, 2):
                _bad(f"projection from {ty}")
            return ty.left if i == 1 else ty.right
        case NeApp(f, a):
            ty = check_ne(ctx, f)
            if not isinstance(ty, Arr):
                _bad(f"application of {ty}")
            check_vnf(ctx, ty.dom, a)
            return ty.cod
    _bad(f"not a neutral: {u!r}")


def check_cov(ctx: tuple, c, leaf) -> None:
    match c:
        case CovReturn(j):
            leaf(ctx, j)
        case CovBind(u, ty, body):
            if check_ne(ctx, u) != Comp(ty):
                _bad(f"bind of a neutral not of type {Comp(ty)}")
            check_add(ctx, ty, body, lambda lctx, k: check_cov(lctx, k, leaf))
        case _:
            _bad(f"not a cover: {c!r}")


def check_nf(ctx: tuple, ty, n) -> None:
    """Validate against the focused normal-form grammar at ``ty``.

    Besides the CBPV conditions, every function body and every bind
    continuation must be a complete pattern tree for its domain.
    """
    match n:
        case NfNe(c):
            if not isinstance(ty, AtomN):
                _bad(f"ne at {ty}")

            def leaf(lctx, u):
                if check_ne(lctx, u) != ty:
                    _bad(f"neutral leaf does not have type {ty}")

            check_cov(ctx, c, leaf)
        case NfRet(c):
            if not isinstance(ty, Comp):
                _bad(f"ret at {ty}")
            check_cov(ctx, c, lambda lctx, v: check_vnf(lctx, ty.pos, v))
        case NfUnit():
            if not isinstance(ty, Top):
                _bad(f"unit at {ty}")
        case NfPair(a, b):
            if not isinstance(ty, With):
                _bad(f"pair at {ty}")
            check_nf(ctx, ty.left, a)
            check_nf(ctx, ty.right, b)
        case NfAbs(dom, body):
            if not isinstance(ty, Arr) or ty.dom != dom:
                _bad(f"abs at {ty}")
            check_add(ctx, dom, body, lambda lctx, j: check_nf(lctx, ty.cod, j))
        case _:
            _bad(f"not a normal form: {n!r}")
