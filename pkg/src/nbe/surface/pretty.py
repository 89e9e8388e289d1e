"""Rendering of types, terms and normal forms as parseable text.

Parentheses are inserted only where the grammar needs them.  Bound
variables are named ``x0, x1, ...`` by a counter that advances at every
binder in print order, skipping names already in scope.
"""

from __future__ import annotations

import dataclasses

from ..cbpv import syntax as c
from ..polarized import syntax as z
from ..stlc import syntax as s

# term levels: 0 = anything, 1 = application head, 2 = atom
_EXPR, _HEAD, _ATOM = 0, 1, 2


def _paren(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


# -- types ----------------------------------------------------------------------

# type levels: 0 arrow, 1 sum/with, 2 product, 3 atom


def pretty_type(ty, level: int = 0) -> str:
    tight = isinstance(ty, s.Ty)  # STLC types print compactly, e.g. o+o
    match ty:
        case s.Atom(name):
            return "o" if name == "o" else f"o {name}"
        case c.AtomP(name):
            return f"a+ {name}"
        case c.AtomN(name):
            return f"a- {name}"
        case s.Zero() | c.ZeroP():
            return "0"
        case s.One() | c.OneP():
            return "1"
        case c.Top():
            return "Top"
        case s.Arr(a, b) | c.Arr(a, b):
            return _paren(f"{pretty_type(a, 1)} -> {pretty_type(b, 0)}", level > 0)
        case s.Sum(a, b) | c.SumP(a, b) | c.With(a, b):
            op = "&" if isinstance(ty, c.With) else "+"
            sep = op if tight else f" {op} "
            return _paren(f"{pretty_type(a, 2)}{sep}{pretty_type(b, 1)}", level > 1)
        case s.Prod(a, b) | c.ProdP(a, b):
            sep = "*" if tight else " * "
            return _paren(f"{pretty_type(a, 3)}{sep}{pretty_type(b, 2)}", level > 2)
        case c.Thunk(n):
            return f"U {pretty_type(n, 3)}"
        case c.Comp(p):
            return f"F {pretty_type(p, 3)}"
    raise TypeError(f"not a type: {ty!r}")


# -- names ----------------------------------------------------------------------


class _Names:
    def __init__(self, free: tuple):
        self.counter = 0
        self.taken = set(free)

    def fresh(self, scope: tuple) -> str:
        while True:
            name = f"x{self.counter}"
            self.counter += 1
            if name not in self.taken and name not in scope:
                return name


def _name(scope: tuple, index: int) -> str:
    return scope[len(scope) - 1 - index]


# -- STLC -------------------------------------------------------------------------


def _stlc(t, sc: tuple, nm: _Names, level: int) -> str:
    match t:
        case s.Var(x):
            return _name(sc, x)
        case s.Unit():
            return "()"
        case s.Pair(a, b):
            return f"({_stlc(a, sc, nm, 0)}, {_stlc(b, sc, nm, 0)})"
        case s.Abs(dom, body):
            x = nm.fresh(sc)
            return _paren(f"\\{x}:{pretty_type(dom)}. {_stlc(body, sc + (x,), nm, 0)}", level > _EXPR)
        case s.App(f, a):
            return _paren(f"{_stlc(f, sc, nm, _HEAD)} {_stlc(a, sc, nm, _ATOM)}", level > _HEAD)
        case s.Prj(i, a):
            return _paren(f"{'fst' if i == 1 else 'snd'} {_stlc(a, sc, nm, _ATOM)}", level > _HEAD)
        case s.Inj(i, other, a):
            op = "inl" if i == 1 else "inr"
            return _paren(f"{op}[{pretty_type(other)}] {_stlc(a, sc, nm, _ATOM)}", level > _HEAD)
        case s.Abort(res, a):
            return _paren(f"abort[{pretty_type(res)}] {_stlc(a, sc, nm, _ATOM)}", level > _HEAD)
        case s.Case(scrut, l, r):
            head = _stlc(scrut, sc, nm, 0)
            x = nm.fresh(sc)
            left = _stlc(l, sc + (x,), nm, 0)
            y = nm.fresh(sc)
            right = _stlc(r, sc + (y,), nm, 0)
            return _paren(f"case {head} of {{ inl {x} -> {left} ; inr {y} -> {right} }}", level > _EXPR)
    raise TypeError(f"not an STLC term: {t!r}")


# -- CBPV and the focused calculus ----------------------------------------------------


class _Printer:
    def __init__(self, ctx: tuple, names: tuple):
        self.nm = _Names(names)
        self.ctx0 = ctx

    def val(self, v, sc, tys, level):
        match v:
            case c.Var(x):
                return _name(sc, x)
            case c.ThunkV(t):
                return _paren(f"thunk {self.tm(t, sc, tys, _ATOM)}", level > _HEAD)
            case c.UnitP():
                return "()"
            case c.PairP(a, b):
                return f"({self.val(a, sc, tys, 0)}, {self.val(b, sc, tys, 0)})"
            case c.Inj(i, other, a):
                op = "inl" if i == 1 else "inr"
                return _paren(f"{op}[{pretty_type(other)}] {self.val(a, sc, tys, _ATOM)}", level > _HEAD)
        raise TypeError(f"not a value: {v!r}")

    def tm(self, t, sc, tys, level):
        match t:
            case z.VarN(x):
                return _name(sc, x)
            case c.Ret(v):
                return _paren(f"ret {self.val(v, sc, tys, _ATOM)}", level > _HEAD)
            case c.Force(v):
                return _paren(f"force {self.val(v, sc, tys, _ATOM)}", level > _HEAD)
            case c.Prj(i, a):
                return _paren(f"{'fst' if i == 1 else 'snd'} {self.tm(a, sc, tys, _ATOM)}", level > _HEAD)
            case c.App(f, a):
                return _paren(f"{self.tm(f, sc, tys, _HEAD)} {self.val(a, sc, tys, _ATOM)}", level > _HEAD)
            case c.UnitN():
                return "<>"
            case c.PairN(a, b):
                return f"<{self.tm(a, sc, tys, 0)}, {self.tm(b, sc, tys, 0)}>"
            case c.Abort(res, v):
                return _paren(f"abort[{pretty_type(res)}] {self.val(v, sc, tys, _ATOM)}", level > _HEAD)
            case c.Abs(dom, body):
                x = self.nm.fresh(sc)
                text = f"\\{x}:{pretty_type(dom)}. {self.tm(body, sc + (x,), tys + (dom,), 0)}"
                return _paren(text, level > _EXPR)
            case c.Bind(ann, comp, body):
                rhs = self.tm(comp, sc, tys, 0)
                x = self.nm.fresh(sc)
                text = f"let {x} : {pretty_type(ann)} <- {rhs} in {self.tm(body, sc + (x,), tys + (ann,), 0)}"
                return _paren(text, level > _EXPR)
            case c.Split(v, body):
                head = self.val(v, sc, tys, 0)
                x = self.nm.fresh(sc)
                y = self.nm.fresh(sc + (x,))
                text = f"split {head} as ({x}, {y}) in {self.tm(body, sc + (x, y), tys + (None, None), 0)}"
                return _paren(text, level > _EXPR)
            case c.Case(v, l, r):
                head = self.val(v, sc, tys, 0)
                x = self.nm.fresh(sc)
                left = self.tm(l, sc + (x,), tys + (None,), 0)
                y = self.nm.fresh(sc)
                right = self.tm(r, sc + (y,), tys + (None,), 0)
                return _paren(f"case {head} of {{ inl {x} -> {left} ; inr {y} -> {right} }}", level > _EXPR)
            case z.Abs(dom, body, cod):
                ann = pretty_type(dom) if cod is None else pretty_type(c.Arr(dom, cod))
                return _paren(f"\\[{ann}] {self.clauses(body, dom, sc, tys)}", level > _EXPR)
            case z.Bind(comp, body, cod):
                pty = z.infer_tm(self.ctx0 + tys, comp).pos
                ann = "" if cod is None else f"[{pretty_type(cod)}]"
                head = self.tm(comp, sc, tys, _HEAD)
                return _paren(f"bind{ann} {head} {self.clauses(body, pty, sc, tys)}", level > _EXPR)
        raise TypeError(f"not a term: {t!r}")

    # pattern trees back to clauses

    def _pats(self, a, ty, sc, tys):
        """Yield ``(pattern text, scope, types, subtree)`` per branch of ``a``."""
        match ty, a:
            case (c.AtomP(), z.HypP(hyp, body)) | (c.Thunk(), z.HypN(hyp, body)):
                x = self.nm.fresh(sc)
                yield x, sc + (x,), tys + (hyp,), body
            case c.ZeroP(), z.Branch0():
                return
            case c.SumP(p1, p2), z.Branch2(l, r):
                for op, p, sub in (("inl", p1, l), ("inr", p2, r)):
                    for pat, sc2, tys2, rest in self._pats(sub, p, sc, tys):
                        yield f"{op} {pat}", sc2, tys2, rest
            case c.OneP(), z.Split0(body):
                yield "()", sc, tys, body
            case c.ProdP(p1, p2), z.Split2(inner):
                for pat1, sc1, tys1, sub in self._pats(inner, p1, sc, tys):
                    for pat2, sc2, tys2, rest in self._pats(sub, p2, sc1, tys1):
                        yield f"({pat1}, {pat2})", sc2, tys2, rest
            case _:
                raise TypeError(f"pattern tree {a!r} does not fit {ty!r}")

    def clauses(self, a, ty, sc, tys) -> str:
        parts = [f"{pat} -> {self.tm(body, sc2, tys2, 0)}" for pat, sc2, tys2, body in self._pats(a, ty, sc, tys)]
        return "{ " + " | ".join(parts) + " }" if parts else "{}"


# -- entry points -------------------------------------------------------------------


def pretty_term(calculus: str, t, ctx: tuple = (), names: tuple | None = None) -> str:
    """Render a term of ``calculus`` whose free variables live in ``ctx``."""
    if names is None:
        names = tuple(f"v{i}" for i in range(len(ctx)))
    names = tuple(names)
    if calculus == "stlc":
        return _stlc(t, names, _Names(names), 0)
    return _Printer(tuple(ctx), names).tm(t, names, (), 0)


def pretty_nf(calculus: str, ctx: tuple, ty, n, names: tuple | None = None) -> str:
    """Render a normal form by erasing it to a term first."""
    if calculus == "stlc":
        t = s.erase(n)
    elif calculus == "cbpv":
        t = c.erase(ctx, ty, n)
    else:
        t = z.erase(ctx, ty, n)
    return pretty_term(calculus, t, ctx, names)


def pretty_file(calculus: str, ctx: tuple, t, names: tuple | None = None) -> str:
    if names is None:
        names = tuple(f"v{i}" for i in range(len(ctx)))
    lines = [f"var {x} : {pretty_type(ty)} ;" for x, ty in zip(names, ctx)]
    lines.append(f"term {pretty_term(calculus, t, ctx, names)}")
    return "\n".join(lines) + "\n"


def dump(node) -> str:
    """Stable constructor dump: ``(Name child ...)``, bare ``Name`` for leaves."""
    if dataclasses.is_dataclass(node) and not isinstance(node, type):
        fields = [f for f in dataclasses.fields(node) if f.compare]
        kids = [dump(getattr(node, f.name)) for f in fields]
        name = type(node).__name__
        return f"({name} {' '.join(kids)})" if kids else name
    if isinstance(node, tuple):
        return "[" + " ".join(dump(x) for x in node) + "]"
    if node is None:
        return "_"
    if isinstance(node, str):
        return '"' + node.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(node, int):
        return str(node)
    raise TypeError(f"cannot dump {node!r}")


def pretty(item, calculus: str | None = None, ctx: tuple = (), names: tuple | None = None) -> str:
    """Render types directly and terms of the given calculus."""
    if isinstance(item, (s.Ty, c.TyP, c.TyN)):
        return pretty_type(item)
    if calculus is None:
        raise ValueError("a calculus is needed to print terms")
    return pretty_term(calculus, item, ctx, names)
