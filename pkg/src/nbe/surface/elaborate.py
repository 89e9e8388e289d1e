"""From named syntax to intrinsically-indexed terms.

Names become de Bruijn indices (innermost binder = 0), types are sorted by
polarity, and for the focused calculus clause lists are compiled into
pattern trees.  The calculus's own ``infer`` runs last, so every result is
well typed.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..cbpv import syntax as c
from ..errors import (
    ElaborationError,
    NonAtomicVarPattern,
    NonExhaustivePatterns,
    OverlappingPatterns,
    PolarityViolation,
    TypeMismatch,
    UnboundVariable,
)
from ..polarized import syntax as z
from ..stlc import syntax as s
from . import ast as A
from .pretty import pretty_type

CALCULI = ("stlc", "cbpv", "polarized")


def _where(node) -> str:
    line, col = getattr(node, "pos", (0, 0))
    return f" at {line}:{col}" if line else ""


# -- types ----------------------------------------------------------------------


def stlc_type(r: A.RType) -> s.Ty:
    match r:
        case A.RAtom("o", name):
            return s.Atom(name)
        case A.RConst("0"):
            return s.Zero()
        case A.RConst("1"):
            return s.One()
        case A.RBin("+", a, b):
            return s.Sum(stlc_type(a), stlc_type(b))
        case A.RBin("*", a, b):
            return s.Prod(stlc_type(a), stlc_type(b))
        case A.RBin("->", a, b):
            return s.Arr(stlc_type(a), stlc_type(b))
    raise ElaborationError(f"not an STLC type{_where(r)}")


def pos_type(r: A.RType) -> c.TyP:
    match r:
        case A.RAtom("+", name):
            return c.AtomP(name)
        case A.RConst("0"):
            return c.ZeroP()
        case A.RConst("1"):
            return c.OneP()
        case A.RBin("+", a, b):
            return c.SumP(pos_type(a), pos_type(b))
        case A.RBin("*", a, b):
            return c.ProdP(pos_type(a), pos_type(b))
        case A.RShift("U", n):
            return c.Thunk(neg_type(n))
    raise PolarityViolation(f"expected a positive type{_where(r)}")


def neg_type(r: A.RType) -> c.TyN:
    match r:
        case A.RAtom("-", name):
            return c.AtomN(name)
        case A.RConst("Top"):
            return c.Top()
        case A.RBin("&", a, b):
            return c.With(neg_type(a), neg_type(b))
        case A.RBin("->", a, b):
            return c.Arr(pos_type(a), neg_type(b))
        case A.RShift("F", p):
            return c.Comp(pos_type(p))
    raise PolarityViolation(f"expected a negative type{_where(r)}")


def _pol_hyp(r: A.RType):
    """A context entry of the focused calculus: a positive atom or a negative type."""
    if isinstance(r, A.RAtom) and r.kind == "+":
        return c.AtomP(r.name)
    return neg_type(r)


def elab_type(calculus: str, r: A.RType):
    if calculus == "stlc":
        return stlc_type(r)
    try:
        return pos_type(r)
    except PolarityViolation:
        return neg_type(r)


# -- scopes -----------------------------------------------------------------------


@dataclass(frozen=True)
class _Scope:
    names: tuple = ()
    types: tuple = ()

    def push(self, name, ty=None) -> "_Scope":
        return _Scope(self.names + (name,), self.types + (ty,))

    def lookup(self, r: A.RVar):
        for k in range(len(self.names) - 1, -1, -1):
            if self.names[k] == r.name:
                return len(self.names) - 1 - k, self.types[k]
        raise UnboundVariable(f"unbound variable {r.name!r}{_where(r)}")

    def ctx(self) -> tuple:
        return self.types


def _unsupported(calculus, r):
    raise ElaborationError(f"{type(r).__name__[1:].lower()} is not part of {calculus}{_where(r)}")


# -- STLC -------------------------------------------------------------------------


def _stlc(sc: _Scope, r):
    match r:
        case A.RVar():
            return s.Var(sc.lookup(r)[0])
        case A.RLam(x, ty, body):
            return s.Abs(stlc_type(ty), _stlc(sc.push(x), body))
        case A.RApp(f, a):
            return s.App(_stlc(sc, f), _stlc(sc, a))
        case A.RTuple((), False):
            return s.Unit()
        case A.RTuple((a, b), False):
            return s.Pair(_stlc(sc, a), _stlc(sc, b))
        case A.RPrefix("fst" | "snd", None, a):
            return s.Prj(1 if r.op == "fst" else 2, _stlc(sc, a))
        case A.RPrefix("inl" | "inr", ty, a):
            return s.Inj(1 if r.op == "inl" else 2, stlc_type(ty), _stlc(sc, a))
        case A.RPrefix("abort", ty, a):
            return s.Abort(stlc_type(ty), _stlc(sc, a))
        case A.RCase(scrut, x, l, y, rr):
            return s.Case(_stlc(sc, scrut), _stlc(sc.push(x), l), _stlc(sc.push(y), rr))
    _unsupported("stlc", r)


# -- CBPV -------------------------------------------------------------------------


def _cbpv_val(sc: _Scope, r):
    match r:
        case A.RVar():
            return c.Var(sc.lookup(r)[0])
        case A.RPrefix("thunk", None, t):
            return c.ThunkV(_cbpv_tm(sc, t))
        case A.RTuple((), False):
            return c.UnitP()
        case A.RTuple((a, b), False):
            return c.PairP(_cbpv_val(sc, a), _cbpv_val(sc, b))
        case A.RPrefix("inl" | "inr", ty, a):
            return c.Inj(1 if r.op == "inl" else 2, pos_type(ty), _cbpv_val(sc, a))
    raise TypeMismatch(f"expected a value{_where(r)}")


def _cbpv_tm(sc: _Scope, r):
    match r:
        case A.RVar():
            raise TypeMismatch(f"{r.name!r} is a value; a computation is expected (use force){_where(r)}")
        case A.RLam(x, ty, body):
            return c.Abs(pos_type(ty), _cbpv_tm(sc.push(x), body))
        case A.RApp(f, a):
            return c.App(_cbpv_tm(sc, f), _cbpv_val(sc, a))
        case A.RTuple((), True):
            return c.UnitN()
        case A.RTuple((a, b), True):
            return c.PairN(_cbpv_tm(sc, a), _cbpv_tm(sc, b))
        case A.RPrefix("force", None, v):
            return c.Force(_cbpv_val(sc, v))
        case A.RPrefix("ret", None, v):
            return c.Ret(_cbpv_val(sc, v))
        case A.RPrefix("fst" | "snd", None, a):
            return c.Prj(1 if r.op == "fst" else 2, _cbpv_tm(sc, a))
        case A.RPrefix("abort", ty, v):
            return c.Abort(neg_type(ty), _cbpv_val(sc, v))
        case A.RLet(x, ty, comp, body):
            return c.Bind(pos_type(ty), _cbpv_tm(sc, comp), _cbpv_tm(sc.push(x), body))
        case A.RSplit(v, x, y, body):
            return c.Split(_cbpv_val(sc, v), _cbpv_tm(sc.push(x).push(y), body))
        case A.RCase(v, x, l, y, rr):
            return c.Case(_cbpv_val(sc, v), _cbpv_tm(sc.push(x), l), _cbpv_tm(sc.push(y), rr))
        case A.RTuple() | A.RPrefix("thunk" | "inl" | "inr", _, _):
            raise TypeMismatch(f"expected a computation, found a value{_where(r)}")
    _unsupported("cbpv", r)


# -- focused calculus -------------------------------------------------------------


def _pol_val(sc: _Scope, r):
    match r:
        case A.RVar():
            ix, ty = sc.lookup(r)
            if not isinstance(ty, c.AtomP):
                raise TypeMismatch(f"{r.name!r} is a negative hypothesis, not a value{_where(r)}")
            return c.Var(ix)
        case A.RPrefix("thunk", None, t):
            return c.ThunkV(_pol_tm(sc, t))
        case A.RTuple((), False):
            return c.UnitP()
        case A.RTuple((a, b), False):
            return c.PairP(_pol_val(sc, a), _pol_val(sc, b))
        case A.RPrefix("inl" | "inr", ty, a):
            return c.Inj(1 if r.op == "inl" else 2, pos_type(ty), _pol_val(sc, a))
    raise TypeMismatch(f"expected a value{_where(r)}")


def _annotation(r: A.RType | None):
    if r is None:
        return None, None
    if isinstance(r, A.RBin) and r.op == "->":
        return pos_type(r.left), neg_type(r.right)
    return pos_type(r), None


def _pol_tm(sc: _Scope, r):
    match r:
        case A.RVar():
            ix, ty = sc.lookup(r)
            if not isinstance(ty, c.TyN):
                raise TypeMismatch(f"{r.name!r} is a positive atom, not a computation{_where(r)}")
            return z.VarN(ix)
        case A.RMatchLam(ty, clauses):
            dom, cod = _annotation(ty)
            body = compile_clauses(sc, dom, clauses, _pol_tm, r)
            return z.Abs(dom, body, cod if z.leafless(body) else None)
        case A.RBind(ann, comp, clauses):
            t = _pol_tm(sc, comp)
            cty = z.infer_tm(sc.ctx(), t)
            if not isinstance(cty, c.Comp):
                raise TypeMismatch(f"bind expects a computation of type F P{_where(r)}")
            cod = neg_type(ann) if ann is not None else None
            body = compile_clauses(sc, cty.pos, clauses, _pol_tm, r)
            return z.Bind(t, body, cod if z.leafless(body) else None)
        case A.RApp(f, a):
            return c.App(_pol_tm(sc, f), _pol_val(sc, a))
        case A.RTuple((), True):
            return c.UnitN()
        case A.RTuple((a, b), True):
            return c.PairN(_pol_tm(sc, a), _pol_tm(sc, b))
        case A.RPrefix("force", None, v):
            return c.Force(_pol_val(sc, v))
        case A.RPrefix("ret", None, v):
            return c.Ret(_pol_val(sc, v))
        case A.RPrefix("fst" | "snd", None, a):
            return c.Prj(1 if r.op == "fst" else 2, _pol_tm(sc, a))
        case A.RTuple() | A.RPrefix("thunk" | "inl" | "inr", _, _):
            raise TypeMismatch(f"expected a computation, found a value{_where(r)}")
    _unsupported("polarized", r)


# -- clause compilation -----------------------------------------------------------


@dataclass(frozen=True)
class _Row:
    pats: tuple  # pending patterns, aligned with the pending column types
    names: tuple  # names bound so far, in hypothesis order
    clause: A.Clause


def compile_clauses(sc: _Scope, ty, clauses, elab_leaf, node=None):
    """Compile ``pattern -> body`` clauses at type ``ty`` into a pattern tree.

    Columns are consumed left to right and products are split before their
    components, which reproduces the shape of a complete pattern-matching
    phase.  Variables may only bind positive atoms and thunks.
    """
    rows = [_Row((cl.pattern,), (), cl) for cl in clauses]
    return _compile(sc, (), (ty,), rows, elab_leaf, node)


def _compile(base, hyps, cols, rows, elab_leaf, node):
    if not cols:
        if not rows:
            raise NonExhaustivePatterns(f"missing a clause{_where(node)}")
        if len(rows) > 1:
            raise OverlappingPatterns(f"clause{_where(rows[1].clause.pattern)} is redundant")
        row = rows[0]
        # rows may name hypotheses differently; the survivor's names are in scope
        sc = base
        for name, hyp in zip(row.names, hyps):
            sc = sc.push(name, hyp)
        return elab_leaf(sc, row.clause.body)

    ty, rest = cols[0], cols[1:]

    def heads(*kinds):
        for row in rows:
            p = row.pats[0]
            if isinstance(p, A.PVar) and A.PVar not in kinds:
                raise NonAtomicVarPattern(f"variable {p.name!r} cannot bind a value of type {pretty_type(ty)}{_where(p)}")
            if not isinstance(p, kinds):
                raise TypeMismatch(f"pattern{_where(p)} does not match type {pretty_type(ty)}")

    def shift(fn):
        return [_Row(*fn(r_)) for r_ in rows]

    match ty:
        case c.AtomP() | c.Thunk():
            heads(A.PVar)
            hyp = ty if isinstance(ty, c.AtomP) else ty.neg
            sub = shift(lambda r_: (r_.pats[1:], r_.names + (r_.pats[0].name,), r_.clause))
            body = _compile(base, hyps + (hyp,), rest, sub, elab_leaf, node)
            return z.HypP(hyp, body) if isinstance(ty, c.AtomP) else z.HypN(hyp, body)
        case c.OneP():
            heads(A.PUnit)
            sub = shift(lambda r_: (r_.pats[1:], r_.names, r_.clause))
            return z.Split0(_compile(base, hyps, rest, sub, elab_leaf, node))
        case c.ProdP(p1, p2):
            heads(A.PPair)
            sub = shift(lambda r_: ((r_.pats[0].fst, r_.pats[0].snd) + r_.pats[1:], r_.names, r_.clause))
            return z.Split2(_compile(base, hyps, (p1, p2) + rest, sub, elab_leaf, node))
        case c.ZeroP():
            heads()
            return z.Branch0()
        case c.SumP(p1, p2):
            heads(A.PInj)
            sides = []
            for i, p in ((1, p1), (2, p2)):
                sub = [_Row((r_.pats[0].arg,) + r_.pats[1:], r_.names, r_.clause) for r_ in rows if r_.pats[0].i == i]
                sides.append(_compile(base, hyps, (p,) + rest, sub, elab_leaf, node))
            return z.Branch2(*sides)
    raise PolarityViolation(f"cannot match on type {pretty_type(ty)}")


# -- entry points -------------------------------------------------------------------


def elaborate(file: A.SourceFile, calculus: str):
    """Return ``(ctx, term)`` for a parsed source file."""
    if calculus not in CALCULI:
        raise ValueError(f"unknown calculus {calculus!r}")
    sc = _Scope()
    for name, rty in file.decls:
        if calculus == "stlc":
            ty = stlc_type(rty)
        elif calculus == "cbpv":
            ty = pos_type(rty)
        else:
            ty = _pol_hyp(rty)
        sc = sc.push(name, ty)
    ctx = sc.ctx()
    if calculus == "stlc":
        t = _stlc(sc, file.term)
        s.infer(ctx, t)
    elif calculus == "cbpv":
        t = _cbpv_tm(sc, file.term)
        c.infer_tm(ctx, t)
    else:
        t = _pol_tm(sc, file.term)
        z.infer_tm(z.check_ctx(ctx), t)
    return ctx, t


def names_of(file: A.SourceFile) -> tuple:
    return tuple(name for name, _ in file.decls)
