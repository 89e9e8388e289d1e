"""Simple types, raw terms, normal and neutral forms of the STLC with sums."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import BranchTypeDisagreement, InvalidNormalForm, TypeMismatch, UnboundVariable
from ..kernel import OPE, lift_table


# -- types -------------------------------------------------------------------


class Ty:
    positive = False

    @property
    def negative(self) -> bool:
        return not self.positive


@dataclass(frozen=True)
class Atom(Ty):
    name: str = "o"
    positive = True


@dataclass(frozen=True)
class Zero(Ty):
    positive = True


@dataclass(frozen=True)
class One(Ty):
    pass


@dataclass(frozen=True)
class Sum(Ty):
    left: Ty
    right: Ty
    positive = True


@dataclass(frozen=True)
class Prod(Ty):
    left: Ty
    right: Ty


@dataclass(frozen=True)
class Arr(Ty):
    dom: Ty
    cod: Ty


def type_depth(ty: Ty) -> int:
    if isinstance(ty, (Sum, Prod)):
        return 1 + max(type_depth(ty.left), type_depth(ty.right))
    if isinstance(ty, Arr):
        return 1 + max(type_depth(ty.dom), type_depth(ty.cod))
    return 0


# -- terms -------------------------------------------------------------------
#
# Every class implements ``_ren(table)`` which renames along an index table
# (see ``kernel.lift_table``); ``rename(tau)`` is the public face.


class Syntax:
    def rename(self, tau: OPE):
        return self._ren(tau.table)


@dataclass(frozen=True)
class Var(Syntax):
    index: int

    def _ren(self, t):
        return Var(t[self.index])


@dataclass(frozen=True)
class Abs(Syntax):
    dom: Ty
    body: "Term"

    def _ren(self, t):
        return Abs(self.dom, self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class App(Syntax):
    fun: "Term"
    arg: "Term"

    def _ren(self, t):
        return App(self.fun._ren(t), self.arg._ren(t))


@dataclass(frozen=True)
class Unit(Syntax):
    def _ren(self, t):
        return self


@dataclass(frozen=True)
class Pair(Syntax):
    fst: "Term"
    snd: "Term"

    def _ren(self, t):
        return Pair(self.fst._ren(t), self.snd._ren(t))


@dataclass(frozen=True)
class Prj(Syntax):
    i: int
    arg: "Term"

    def _ren(self, t):
        return Prj(self.i, self.arg._ren(t))


@dataclass(frozen=True)
class Inj(Syntax):
    i: int
    other: Ty
    arg: "Term"

    def _ren(self, t):
        return Inj(self.i, self.other, self.arg._ren(t))


@dataclass(frozen=True)
class Case(Syntax):
    scrut: "Term"
    left: "Term"
    right: "Term"

    def _ren(self, t):
        t1 = lift_table(t)
        return Case(self.scrut._ren(t), self.left._ren(t1), self.right._ren(t1))


@dataclass(frozen=True)
class Abort(Syntax):
    result: Ty
    arg: "Term"

    def _ren(self, t):
        return Abort(self.result, self.arg._ren(t))


Term = Var | Abs | App | Unit | Pair | Prj | Inj | Case | Abort


# -- neutral and normal forms -----------------------------------------------


@dataclass(frozen=True)
class NeVar(Syntax):
    index: int

    def _ren(self, t):
        return NeVar(t[self.index])


@dataclass(frozen=True)
class NeApp(Syntax):
    fun: "Ne"
    arg: "Nf"

    def _ren(self, t):
        return NeApp(self.fun._ren(t), self.arg._ren(t))


@dataclass(frozen=True)
class NePrj(Syntax):
    i: int
    arg: "Ne"

    def _ren(self, t):
        return NePrj(self.i, self.arg._ren(t))


Ne = NeVar | NeApp | NePrj


@dataclass(frozen=True)
class NfNe(Syntax):
    """Neutral embedded at an atomic type (``ne``)."""

    ne: Ne

    def _ren(self, t):
        return NfNe(self.ne._ren(t))


@dataclass(frozen=True)
class NfAbs(Syntax):
    dom: Ty
    body: "Nf"

    def _ren(self, t):
        return NfAbs(self.dom, self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class NfUnit(Syntax):
    def _ren(self, t):
        return self


@dataclass(frozen=True)
class NfPair(Syntax):
    fst: "Nf"
    snd: "Nf"

    def _ren(self, t):
        return NfPair(self.fst._ren(t), self.snd._ren(t))


@dataclass(frozen=True)
class NfInj(Syntax):
    i: int
    other: Ty
    arg: "Nf"

    def _ren(self, t):
        return NfInj(self.i, self.other, self.arg._ren(t))


@dataclass(frozen=True)
class NfCase(Syntax):
    scrut: Ne
    left: "Nf"
    right: "Nf"

    def _ren(self, t):
        t1 = lift_table(t)
        return NfCase(self.scrut._ren(t), self.left._ren(t1), self.right._ren(t1))


@dataclass(frozen=True)
class NfAbort(Syntax):
    result: Ty
    scrut: Ne

    def _ren(self, t):
        return NfAbort(self.result, self.scrut._ren(t))


Nf = NfNe | NfAbs | NfUnit | NfPair | NfInj | NfCase | NfAbort


# -- type inference ----------------------------------------------------------


def _lookup(ctx, x):
    if not isinstance(x, int) or not 0 <= x < len(ctx):
        raise UnboundVariable(f"index {x} is unbound in a context of length {len(ctx)}")
    return ctx[len(ctx) - 1 - x]


def _expect(ty, cls, what):
    if not isinstance(ty, cls):
        raise TypeMismatch(f"{what}: expected {cls.__name__}, got {ty}")
    return ty


def infer(ctx: tuple, t) -> Ty:
    """Syntax-directed type inference for terms, neutrals and normal forms."""
    match t:
        case Var(x) | NeVar(x):
            return _lookup(ctx, x)
        case Abs(dom, body) | NfAbs(dom, body):
            return Arr(dom, infer(ctx + (dom,), body))
        case App(f, a) | NeApp(f, a):
            fty = _expect(infer(ctx, f), Arr, "application")
            aty = infer(ctx, a)
            if aty != fty.dom:
                raise TypeMismatch(f"argument has type {aty}, function expects {fty.dom}")
            return fty.cod
        case Unit() | NfUnit():
            return One()
        case Pair(a, b) | NfPair(a, b):
            return Prod(infer(ctx, a), infer(ctx, b))
        case Prj(i, a) | NePrj(i, a):
            pty = _expect(infer(ctx, a), Prod, "projection")
            return pty.left if i == 1 else pty.right
        case Inj(i, other, a) | NfInj(i, other, a):
            aty = infer(ctx, a)
            return Sum(aty, other) if i == 1 else Sum(other, aty)
        case Case(s, l, r) | NfCase(s, l, r):
            sty = _expect(infer(ctx, s), Sum, "case scrutinee")
            lty = infer(ctx + (sty.left,), l)
            rty = infer(ctx + (sty.right,), r)
            if lty != rty:
                raise BranchTypeDisagreement(f"case branches have types {lty} and {rty}")
            return lty
        case Abort(res, a) | NfAbort(res, a):
            _expect(infer(ctx, a), Zero, "abort")
            return res
        case NfNe(u):
            return infer(ctx, u)
    raise TypeMismatch(f"not an STLC term: {t!r}")


# -- erasure -----------------------------------------------------------------


def erase(n):
    """Forget the normal-form discipline; ``ne`` disappears."""
    match n:
        case NeVar(x):
            return Var(x)
        case NeApp(f, a):
            return App(erase(f), erase(a))
        case NePrj(i, a):
            return Prj(i, erase(a))
        case NfNe(u):
            return erase(u)
        case NfAbs(dom, body):
            return Abs(dom, erase(body))
        case NfUnit():
            return Unit()
        case NfPair(a, b):
            return Pair(erase(a), erase(b))
        case NfInj(i, other, a):
            return Inj(i, other, erase(a))
        case NfCase(s, l, r):
            return Case(erase(s), erase(l), erase(r))
        case NfAbort(res, s):
            return Abort(res, erase(s))
    raise TypeError(f"not a normal form: {n!r}")


def term_size(t) -> int:
    match t:
        case Var() | Unit() | NeVar() | NfUnit():
            return 1
        case Abs(_, b) | Prj(_, b) | Inj(_, _, b) | Abort(_, b):
            return 1 + term_size(b)
        case App(a, b) | Pair(a, b):
            return 1 + term_size(a) + term_size(b)
        case Case(s, l, r):
            return 1 + term_size(s) + term_size(l) + term_size(r)
    raise TypeError(f"not a term: {t!r}")


# -- grammar validation ------------------------------------------------------


def check_ne(ctx: tuple, u) -> Ty:
    """Validate a neutral and return its type."""
    match u:
        case NeVar(x):
            if not isinstance(x, int) or not 0 <= x < len(ctx):
                raise InvalidNormalForm(f"unbound neutral variable {x}")
            return ctx[len(ctx) - 1 - x]
        case NeApp(f, a):
            fty = check_ne(ctx, f)
            if not isinstance(fty, Arr):
                raise InvalidNormalForm(f"neutral application of non-function {fty}")
            check_nf(ctx, fty.dom, a)
            return fty.cod
        case NePrj(i, a):
            pty = check_ne(ctx, a)
            if not isinstance(pty, Prod) or i not in (1, 2):
                raise InvalidNormalForm(f"neutral projection from {pty}")
            return pty.left if i == 1 else pty.right
    raise InvalidNormalForm(f"not a neutral: {u!r}")


def check_nf(ctx: tuple, ty: Ty, n) -> None:
    """Check ``n`` against the normal-form grammar at type ``ty``.

    Independent of the normalizer: negative types demand introductions,
    ``case``/``abort`` only appear at positive types, ``ne`` only at atoms.
    """
    match n:
        case NfNe(u):
            if not isinstance(ty, Atom):
                raise InvalidNormalForm(f"ne at non-atomic type {ty}")
            if check_ne(ctx, u) != ty:
                raise InvalidNormalForm(f"neutral does not have type {ty}")
        case NfAbs(dom, body):
            if not isinstance(ty, Arr) or ty.dom != dom:
                raise InvalidNormalForm(f"abs at type {ty}")
            check_nf(ctx + (dom,), ty.cod, body)
        case NfUnit():
            if not isinstance(ty, One):
                raise InvalidNormalForm(f"unit at type {ty}")
        case NfPair(a, b):
            if not isinstance(ty, Prod):
                raise InvalidNormalForm(f"pair at type {ty}")
            check_nf(ctx, ty.left, a)
            check_nf(ctx, ty.right, b)
        case NfInj(i, other, a):
            if not isinstance(ty, Sum):
                raise InvalidNormalForm(f"injection at type {ty}")
            mine, theirs = (ty.left, ty.right) if i == 1 else (ty.right, ty.left)
            if theirs != other or i not in (1, 2):
                raise InvalidNormalForm(f"injection annotation {other} at type {ty}")
            check_nf(ctx, mine, a)
        case NfCase(s, l, r):
            if not ty.positive:
                raise InvalidNormalForm(f"case at negative type {ty}")
            sty = check_ne(ctx, s)
            if not isinstance(sty, Sum):
                raise InvalidNormalForm(f"case on neutral of type {sty}")
            check_nf(ctx + (sty.left,), ty, l)
            check_nf(ctx + (sty.right,), ty, r)
        case NfAbort(res, s):
            if not ty.positive or res != ty:
                raise InvalidNormalForm(f"abort at type {ty}")
            if not isinstance(check_ne(ctx, s), Zero):
                raise InvalidNormalForm("abort on a non-empty neutral")
        case _:
            raise InvalidNormalForm(f"not a normal form: {n!r}")
