"""Recursive-descent parser for source files of all three calculi.

Precedence, loosest first: binders (``\\``, ``let``, ``split``, ``case``,
``bind``) extend as far right as possible; then left-associative
application whose head may be a prefix form (``fst t``, ``inl[T] t`` ...)
taking one atomic argument; then atoms.  In types ``->`` is loosest, then
``+``/``&``, then ``*``; all three are right-associative.
"""

from __future__ import annotations

from ..errors import ParseError
from . import ast as A
from .lexer import Token, tokenize

MAX_DEPTH = 200

_PREFIX = ("fst", "snd", "thunk", "force", "ret")
_ANNOTATED = ("inl", "inr", "abort")


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.depth = 0

    # -- token helpers

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        if t.kind != "eof":
            self.i += 1
        return t

    def fail(self, *expected: str, msg: str | None = None):
        t = self.tok
        raise ParseError(msg or f"unexpected {t.describe()}", t.line, t.col, expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def ident(self) -> str:
        if self.tok.kind != "ident":
            self.fail("identifier")
        return self.advance().text

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail(msg="nesting too deep")

    def leave(self):
        self.depth -= 1

    def pos(self):
        return (self.tok.line, self.tok.col)

    # -- file

    def source(self) -> A.SourceFile:
        decls, seen = [], set()
        while self.at("var"):
            self.advance()
            t = self.tok
            name = self.ident()
            if name in seen:
                raise ParseError(f"duplicate declaration of {name!r}", t.line, t.col)
            seen.add(name)
            self.expect(":")
            decls.append((name, self.type()))
            self.expect(";")
        self.expect("term")
        term = self.term()
        if self.tok.kind != "eof":
            self.fail("end of input")
        return A.SourceFile(tuple(decls), term)

    # -- types

    def type(self) -> A.RType:
        self.enter()
        pos = self.pos()
        left = self.type_sum()
        if self.at("->"):
            self.advance()
            left = A.RBin("->", left, self.type(), pos)
        self.leave()
        return left

    def type_sum(self) -> A.RType:
        pos = self.pos()
        left = self.type_prod()
        if self.at("+") or self.at("&"):
            op = self.advance().text
            self.enter()
            left = A.RBin(op, left, self.type_sum(), pos)
            self.leave()
        return left

    def type_prod(self) -> A.RType:
        pos = self.pos()
        left = self.type_atom()
        if self.at("*"):
            self.advance()
            self.enter()
            left = A.RBin("*", left, self.type_prod(), pos)
            self.leave()
        return left

    def type_atom(self) -> A.RType:
        t, pos = self.tok, self.pos()
        if t.kind in ("atom+", "atom-"):
            self.advance()
            return A.RAtom(t.kind[-1], self.ident(), pos)
        if t.kind == "num":
            self.advance()
            return A.RConst(t.text, pos)
        if t.kind == "ident":
            if t.text == "o":
                self.advance()
                name = self.advance().text if self.tok.kind == "ident" else "o"
                return A.RAtom("o", name, pos)
            if t.text == "Top":
                self.advance()
                return A.RConst("Top", pos)
            if t.text in ("U", "F"):
                self.advance()
                self.enter()
                arg = self.type_atom()
                self.leave()
                return A.RShift(t.text, arg, pos)
        if self.at("("):
            self.advance()
            ty = self.type()
            self.expect(")")
            return ty
        self.fail("type")

    # -- patterns

    def pattern(self) -> A.Pattern:
        self.enter()
        t, pos = self.tok, self.pos()
        if t.kind == "ident":
            self.advance()
            p = A.PVar(t.text, pos)
        elif self.at("inl") or self.at("inr"):
            self.advance()
            p = A.PInj(1 if t.text == "inl" else 2, self.pattern(), pos)
        elif self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                p = A.PUnit(pos)
            else:
                p = self.pattern()
                if self.at(","):
                    self.advance()
                    p = A.PPair(p, self.pattern(), pos)
                self.expect(")")
        else:
            self.fail("pattern")
        self.leave()
        return p

    def clauses(self) -> tuple[A.Clause, ...]:
        self.expect("{")
        out = []
        if not self.at("}"):
            while True:
                p = self.pattern()
                self.expect("->")
                out.append(A.Clause(p, self.term()))
                if not self.at("|"):
                    break
                self.advance()
        self.expect("}")
        return tuple(out)

    # -- terms

    def term(self) -> A.RTerm:
        self.enter()
        pos = self.pos()
        if self.at("\\"):
            self.advance()
            if self.at("["):
                self.advance()
                ty = self.type()
                self.expect("]")
                r = A.RMatchLam(ty, self.clauses(), pos)
            else:
                name = self.ident()
                self.expect(":")
                ty = self.type()
                self.expect(".")
                r = A.RLam(name, ty, self.term(), pos)
        elif self.at("let"):
            self.advance()
            name = self.ident()
            self.expect(":")
            ty = self.type()
            self.expect("<-")
            comp = self.term()
            self.expect("in")
            r = A.RLet(name, ty, comp, self.term(), pos)
        elif self.at("split"):
            self.advance()
            val = self.term()
            self.expect("as")
            self.expect("(")
            x = self.ident()
            self.expect(",")
            y = self.ident()
            self.expect(")")
            self.expect("in")
            r = A.RSplit(val, x, y, self.term(), pos)
        elif self.at("case"):
            self.advance()
            scrut = self.term()
            self.expect("of")
            self.expect("{")
            self.expect("inl")
            x = self.ident()
            self.expect("->")
            left = self.term()
            self.expect(";")
            self.expect("inr")
            y = self.ident()
            self.expect("->")
            right = self.term()
            self.expect("}")
            r = A.RCase(scrut, x, left, y, right, pos)
        elif self.at("bind"):
            self.advance()
            ann = None
            if self.at("["):
                self.advance()
                ann = self.type()
                self.expect("]")
            comp = self.term()
            r = A.RBind(ann, comp, self.clauses(), pos)
        else:
            r = self.app()
        self.leave()
        return r

    def app(self) -> A.RTerm:
        pos = self.pos()
        head = self.head()
        while self.starts_atom():
            head = A.RApp(head, self.atom(), pos)
        return head

    def head(self) -> A.RTerm:
        t, pos = self.tok, self.pos()
        if t.kind == "kw" and t.text in _PREFIX:
            self.advance()
            self.enter()
            r = A.RPrefix(t.text, None, self.atom(), pos)
            self.leave()
            return r
        if t.kind == "kw" and t.text in _ANNOTATED:
            self.advance()
            self.expect("[")
            ann = self.type()
            self.expect("]")
            self.enter()
            r = A.RPrefix(t.text, ann, self.atom(), pos)
            self.leave()
            return r
        if not self.starts_atom():
            self.fail("term")
        return self.atom()

    def starts_atom(self) -> bool:
        return self.tok.kind == "ident" or self.at("(") or self.at("<")

    def atom(self) -> A.RTerm:
        t, pos = self.tok, self.pos()
        if t.kind == "ident":
            self.advance()
            return A.RVar(t.text, pos)
        for open_, close, angle in (("(", ")", False), ("<", ">", True)):
            if self.at(open_):
                self.advance()
                if self.at(close):
                    self.advance()
                    return A.RTuple((), angle, pos)
                first = self.term()
                if self.at(","):
                    self.advance()
                    second = self.term()
                    self.expect(close)
                    return A.RTuple((first, second), angle, pos)
                if angle:
                    self.fail("','")
                self.expect(close)
                return first
        self.fail("term")


def parse(text: str | bytes, calculus: str | None = None) -> A.SourceFile:
    """Parse a source file.  ``calculus`` is accepted for symmetry with
    :func:`elaborate`; the raw grammar is shared."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8 ({exc.reason})") from None
    try:
        return _Parser(text).source()
    except RecursionError:
        raise ParseError("nesting too deep") from None


def parse_type(text: str) -> A.RType:
    p = _Parser(text)
    ty = p.type()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return ty


def parse_term(text: str) -> A.RTerm:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.fail("end of input")
    return t
