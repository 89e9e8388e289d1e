"""Call-by-push-value: types, values, terms and their normal forms."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import BranchTypeDisagreement, InvalidNormalForm, TypeMismatch, UnboundVariable
from ..kernel import OPE, lift, lift_table, lookup, rename


# -- types -------------------------------------------------------------------


class TyP:
    positive = True


class TyN:
    positive = False


@dataclass(frozen=True)
class AtomP(TyP):
    name: str


@dataclass(frozen=True)
class ZeroP(TyP):
    pass


@dataclass(frozen=True)
class OneP(TyP):
    pass


@dataclass(frozen=True)
class SumP(TyP):
    left: TyP
    right: TyP


@dataclass(frozen=True)
class ProdP(TyP):
    left: TyP
    right: TyP


@dataclass(frozen=True)
class Thunk(TyP):
    neg: TyN


@dataclass(frozen=True)
class AtomN(TyN):
    name: str


@dataclass(frozen=True)
class Top(TyN):
    pass


@dataclass(frozen=True)
class With(TyN):
    left: TyN
    right: TyN


@dataclass(frozen=True)
class Arr(TyN):
    dom: TyP
    cod: TyN


@dataclass(frozen=True)
class Comp(TyN):
    pos: TyP


def type_depth(ty) -> int:
    match ty:
        case SumP(a, b) | ProdP(a, b) | With(a, b) | Arr(a, b):
            return 1 + max(type_depth(a), type_depth(b))
        case Thunk(a) | Comp(a):
            return 1 + type_depth(a)
    return 0


# -- values and terms ----------------------------------------------------------


class Syntax:
    def rename(self, tau: OPE):
        return self._ren(tau.table)


@dataclass(frozen=True)
class Var(Syntax):
    index: int

    def _ren(self, t):
        return Var(t[self.index])


@dataclass(frozen=True)
class ThunkV(Syntax):
    body: "Tm"

    def _ren(self, t):
        return ThunkV(self.body._ren(t))


@dataclass(frozen=True)
class UnitP(Syntax):
    def _ren(self, t):
        return self


@dataclass(frozen=True)
class PairP(Syntax):
    fst: "Val"
    snd: "Val"

    def _ren(self, t):
        return PairP(self.fst._ren(t), self.snd._ren(t))


@dataclass(frozen=True)
class Inj(Syntax):
    i: int
    other: TyP
    arg: "Val"

    def _ren(self, t):
        return Inj(self.i, self.other, self.arg._ren(t))


Val = Var | ThunkV | UnitP | PairP | Inj


@dataclass(frozen=True)
class Ret(Syntax):
    val: Val

    def _ren(self, t):
        return Ret(self.val._ren(t))


@dataclass(frozen=True)
class Abs(Syntax):
    dom: TyP
    body: "Tm"

    def _ren(self, t):
        return Abs(self.dom, self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class PairN(Syntax):
    fst: "Tm"
    snd: "Tm"

    def _ren(self, t):
        return PairN(self.fst._ren(t), self.snd._ren(t))


@dataclass(frozen=True)
class UnitN(Syntax):
    def _ren(self, t):
        return self


@dataclass(frozen=True)
class Force(Syntax):
    val: Val

    def _ren(self, t):
        return Force(self.val._ren(t))


@dataclass(frozen=True)
class App(Syntax):
    fun: "Tm"
    arg: Val

    def _ren(self, t):
        return App(self.fun._ren(t), self.arg._ren(t))


@dataclass(frozen=True)
class Prj(Syntax):
    i: int
    arg: "Tm"

    def _ren(self, t):
        return Prj(self.i, self.arg._ren(t))


@dataclass(frozen=True)
class Bind(Syntax):
    ann: TyP
    comp: "Tm"
    body: "Tm"

    def _ren(self, t):
        return Bind(self.ann, self.comp._ren(t), self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class Split(Syntax):
    val: Val
    body: "Tm"

    def _ren(self, t):
        return Split(self.val._ren(t), self.body._ren(lift_table(t, 2)))


@dataclass(frozen=True)
class Case(Syntax):
    val: Val
    left: "Tm"
    right: "Tm"

    def _ren(self, t):
        t1 = lift_table(t)
        return Case(self.val._ren(t), self.left._ren(t1), self.right._ren(t1))


@dataclass(frozen=True)
class Abort(Syntax):
    result: TyN
    val: Val

    def _ren(self, t):
        return Abort(self.result, self.val._ren(t))


Tm = Ret | Abs | PairN | UnitN | Force | App | Prj | Bind | Split | Case | Abort


# -- normal forms ----------------------------------------------------------------


@dataclass(frozen=True)
class VnfVar(Syntax):
    index: int

    def _ren(self, t):
        return VnfVar(t[self.index])


@dataclass(frozen=True)
class VnfThunk(Syntax):
    nf: "Nf"

    def _ren(self, t):
        return VnfThunk(self.nf._ren(t))


@dataclass(frozen=True)
class VnfUnit(Syntax):
    def _ren(self, t):
        return self


@dataclass(frozen=True)
class VnfPair(Syntax):
    fst: "Vnf"
    snd: "Vnf"

    def _ren(self, t):
        return VnfPair(self.fst._ren(t), self.snd._ren(t))


@dataclass(frozen=True)
class VnfInj(Syntax):
    i: int
    arg: "Vnf"

    def _ren(self, t):
        return VnfInj(self.i, self.arg._ren(t))


Vnf = VnfVar | VnfThunk | VnfUnit | VnfPair | VnfInj


@dataclass(frozen=True)
class NeForce(Syntax):
    index: int

    def _ren(self, t):
        return NeForce(t[self.index])


@dataclass(frozen=True)
class NePrj(Syntax):
    i: int
    arg: "Ne"

    def _ren(self, t):
        return NePrj(self.i, self.arg._ren(t))


@dataclass(frozen=True)
class NeApp(Syntax):
    fun: "Ne"
    arg: Vnf

    def _ren(self, t):
        return NeApp(self.fun._ren(t), self.arg._ren(t))


Ne = NeForce | NePrj | NeApp


# The cover monad.  ``rename`` takes an OPE and renames arbitrary (semantic)
# leaves; ``_ren`` takes an index table and expects syntactic leaves.


@dataclass(frozen=True)
class CovReturn:
    leaf: object

    def rename(self, tau):
        return CovReturn(rename(tau, self.leaf))

    def _ren(self, t):
        return CovReturn(self.leaf._ren(t))


@dataclass(frozen=True)
class CovBind:
    ne: Ne
    ty: TyP
    body: "Cov"

    def rename(self, tau):
        return CovBind(self.ne.rename(tau), self.ty, self.body.rename(lift(tau, self.ty)))

    def _ren(self, t):
        return CovBind(self.ne._ren(t), self.ty, self.body._ren(lift_table(t)))


@dataclass(frozen=True)
class CovSplit:
    index: int
    body: "Cov"

    def rename(self, tau):
        ty = lookup(tau.source, self.index)
        inner = lift(lift(tau, ty.left), ty.right)
        return CovSplit(tau.table[self.index], self.body.rename(inner))

    def _ren(self, t):
        return CovSplit(t[self.index], self.body._ren(lift_table(t, 2)))


@dataclass(frozen=True)
class CovCase:
    index: int
    left: "Cov"
    right: "Cov"

    def rename(self, tau):
        ty = lookup(tau.source, self.index)
        return CovCase(
            tau.table[self.index],
            self.left.rename(lift(tau, ty.left)),
            self.right.rename(lift(tau, ty.right)),
        )

    def _ren(self, t):
        t1 = lift_table(t)
        return CovCase(t[self.index], self.left._ren(t1), self.right._ren(t1))


@dataclass(frozen=True)
class CovAbort:
    index: int

    def rename(self, tau):
        return CovAbort(tau.table[self.index])

    def _ren(self, t):
        return CovAbort(t[self.index])


Cov = CovReturn | CovBind | CovSplit | CovCase | CovAbort


@dataclass(frozen=True)
class NfNe(Syntax):
    cov: Cov

    def _ren(self, t):
        return NfNe(self.cov._ren(t))


@dataclass(frozen=True)
class NfRet(Syntax):
    cov: Cov

    def _ren(self, t):
        return NfRet(self.cov._ren(t))


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
class NfAbs(Syntax):
    dom: TyP
    body: "Nf"

    def _ren(self, t):
        return NfAbs(self.dom, self.body._ren(lift_table(t)))


Nf = NfNe | NfRet | NfUnit | NfPair | NfAbs


# -- type inference ----------------------------------------------------------------


def _lookup(ctx, x):
    if not isinstance(x, int) or not 0 <= x < len(ctx):
        raise UnboundVariable(f"index {x} is unbound in a context of length {len(ctx)}")
    return ctx[len(ctx) - 1 - x]


def _expect(ty, cls, what):
    if not isinstance(ty, cls):
        raise TypeMismatch(f"{what}: expected {cls.__name__}, got {ty}")
    return ty


def infer_val(ctx: tuple, v) -> TyP:
    match v:
        case Var(x):
            return _lookup(ctx, x)
        case ThunkV(t):
            return Thunk(infer_tm(ctx, t))
        case UnitP():
            return OneP()
        case PairP(a, b):
            return ProdP(infer_val(ctx, a), infer_val(ctx, b))
        case Inj(i, other, a):
            aty = infer_val(ctx, a)
            return SumP(aty, other) if i == 1 else SumP(other, aty)
    raise TypeMismatch(f"not a CBPV value: {v!r}")


def infer_tm(ctx: tuple, t) -> TyN:
    match t:
        case Ret(v):
            return Comp(infer_val(ctx, v))
        case Abs(dom, body):
            return Arr(dom, infer_tm(ctx + (dom,), body))
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
        case Bind(ann, c, body):
            cty = _expect(infer_tm(ctx, c), Comp, "bind")
            if cty.pos != ann:
                raise TypeMismatch(f"bind annotated {ann} but computation returns {cty.pos}")
            return infer_tm(ctx + (ann,), body)
        case Split(v, body):
            pty = _expect(infer_val(ctx, v), ProdP, "split")
            return infer_tm(ctx + (pty.left, pty.right), body)
        case Case(v, l, r):
            sty = _expect(infer_val(ctx, v), SumP, "case")
            lty = infer_tm(ctx + (sty.left,), l)
            rty = infer_tm(ctx + (sty.right,), r)
            if lty != rty:
                raise BranchTypeDisagreement(f"case branches have types {lty} and {rty}")
            return lty
        case Abort(res, v):
            _expect(infer_val(ctx, v), ZeroP, "abort")
            return res
    raise TypeMismatch(f"not a CBPV term: {t!r}")


def term_size(t) -> int:
    match t:
        case Var() | UnitP() | UnitN():
            return 1
        case ThunkV(a) | Ret(a) | Abs(_, a) | Force(a) | Prj(_, a) | Inj(_, _, a) | Abort(_, a):
            return 1 + term_size(a)
        case PairP(a, b) | PairN(a, b) | App(a, b) | Bind(_, a, b) | Split(a, b):
            return 1 + term_size(a) + term_size(b)
        case Case(v, l, r):
            return 1 + term_size(v) + term_size(l) + term_size(r)
    raise TypeError(f"not a CBPV term: {t!r}")


# -- erasure (type-directed: values need their injection annotations) ----------


def erase_vnf(ctx: tuple, ty: TyP, v) -> Val:
    match ty, v:
        case AtomP(), VnfVar(x):
            return Var(x)
        case Thunk(n), VnfThunk(nf):
            return ThunkV(erase_nf(ctx, n, nf))
        case OneP(), VnfUnit():
            return UnitP()
        case ProdP(a, b), VnfPair(x, y):
            return PairP(erase_vnf(ctx, a, x), erase_vnf(ctx, b, y))
        case SumP(a, b), VnfInj(1, x):
            return Inj(1, b, erase_vnf(ctx, a, x))
        case SumP(a, b), VnfInj(2, y):
            return Inj(2, a, erase_vnf(ctx, b, y))
    raise InvalidNormalForm(f"value normal form {v!r} at {ty!r}")


def erase_ne(ctx: tuple, u) -> tuple[Tm, TyN]:
    match u:
        case NeForce(x):
            return Force(Var(x)), _lookup(ctx, x).neg
        case NePrj(i, a):
            t, ty = erase_ne(ctx, a)
            return Prj(i, t), (ty.left if i == 1 else ty.right)
        case NeApp(f, a):
            t, ty = erase_ne(ctx, f)
            return App(t, erase_vnf(ctx, ty.dom, a)), ty.cod
    raise InvalidNormalForm(f"not a neutral: {u!r}")


def erase_cov(ctx: tuple, res: TyN, c, leaf) -> Tm:
    """Erase a cover; ``leaf(ctx, j)`` erases the leaves."""
    match c:
        case CovReturn(j):
            return leaf(ctx, j)
        case CovBind(u, ty, body):
            t, _ = erase_ne(ctx, u)
            return Bind(ty, t, erase_cov(ctx + (ty,), res, body, leaf))
        case CovSplit(x, body):
            pty = _lookup(ctx, x)
            return Split(Var(x), erase_cov(ctx + (pty.left, pty.right), res, body, leaf))
        case CovCase(x, l, r):
            sty = _lookup(ctx, x)
            return Case(
                Var(x),
                erase_cov(ctx + (sty.left,), res, l, leaf),
                erase_cov(ctx + (sty.right,), res, r, leaf),
            )
        case CovAbort(x):
            return Abort(res, Var(x))
    raise InvalidNormalForm(f"not a cover: {c!r}")


def erase_nf(ctx: tuple, ty: TyN, n) -> Tm:
    match ty, n:
        case AtomN(), NfNe(c):
            return erase_cov(ctx, ty, c, lambda lctx, u: erase_ne(lctx, u)[0])
        case Comp(p), NfRet(c):
            return erase_cov(ctx, ty, c, lambda lctx, v: Ret(erase_vnf(lctx, p, v)))
        case Top(), NfUnit():
            return UnitN()
        case With(a, b), NfPair(x, y):
            return PairN(erase_nf(ctx, a, x), erase_nf(ctx, b, y))
        case Arr(p, m), NfAbs(dom, body):
            return Abs(dom, erase_nf(ctx + (p,), m, body))
    raise InvalidNormalForm(f"normal form {n!r} at {ty!r}")


def erase(ctx: tuple, ty: TyN, n) -> Tm:
    return erase_nf(tuple(ctx), ty, n)


# -- grammar validation --------------------------------------------------------


def _bad(msg):
    raise InvalidNormalForm(msg)


def _ctx_entry(ctx, x):
    if not isinstance(x, int) or not 0 <= x < len(ctx):
        _bad(f"unbound index {x}")
    return ctx[len(ctx) - 1 - x]


def check_vnf(ctx: tuple, ty: TyP, v) -> None:
    match v:
        case VnfVar(x):
            if not isinstance(ty, AtomP) or _ctx_entry(ctx, x) != ty:
                _bad(f"value variable {x} at {ty} (variables only at positive atoms)")
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


def check_ne(ctx: tuple, u) -> TyN:
    match u:
        case NeForce(x):
            ty = _ctx_entry(ctx, x)
            if not isinstance(ty, Thunk):
                _bad(f"force of variable of type {ty}")
            return ty.neg
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
    """Case/split/abort scrutinize variables, bind scrutinizes neutrals."""
    match c:
        case CovReturn(j):
            leaf(ctx, j)
        case CovBind(u, ty, body):
            uty = check_ne(ctx, u)
            if uty != Comp(ty):
                _bad(f"bind of a neutral of type {uty} annotated {ty}")
            check_cov(ctx + (ty,), body, leaf)
        case CovSplit(x, body):
            ty = _ctx_entry(ctx, x)
            if not isinstance(ty, ProdP):
                _bad(f"split on variable of type {ty}")
            check_cov(ctx + (ty.left, ty.right), body, leaf)
        case CovCase(x, l, r):
            ty = _ctx_entry(ctx, x)
            if not isinstance(ty, SumP):
                _bad(f"case on variable of type {ty}")
            check_cov(ctx + (ty.left,), l, leaf)
            check_cov(ctx + (ty.right,), r, leaf)
        case CovAbort(x):
            if not isinstance(_ctx_entry(ctx, x), ZeroP):
                _bad("abort on a non-empty variable")
        case _:
            _bad(f"not a cover: {c!r}")


def check_nf(ctx: tuple, ty: TyN, n) -> None:
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
            check_nf(ctx + (dom,), ty.cod, body)
        case _:
            _bad(f"not a normal form: {n!r}")
