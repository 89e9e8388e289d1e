"""Named (pre-elaboration) syntax shared by the three calculi.

One raw grammar covers all three languages; the elaborator decides which
constructs are legal in which calculus.  ``pos`` fields hold ``(line, col)``
and never take part in equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field

Pos = tuple[int, int]


def _pos():
    return field(default=(0, 0), compare=False, repr=False)


# -- types ----------------------------------------------------------------------


@dataclass(frozen=True)
class RAtom:
    kind: str  # "o" (STLC), "+" or "-"
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class RConst:
    name: str  # "0", "1" or "Top"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RBin:
    op: str  # "->", "+", "*" or "&"
    left: "RType"
    right: "RType"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RShift:
    op: str  # "U" or "F"
    arg: "RType"
    pos: Pos = _pos()


RType = RAtom | RConst | RBin | RShift


# -- patterns -------------------------------------------------------------------


@dataclass(frozen=True)
class PVar:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class PUnit:
    pos: Pos = _pos()


@dataclass(frozen=True)
class PPair:
    fst: "Pattern"
    snd: "Pattern"
    pos: Pos = _pos()


@dataclass(frozen=True)
class PInj:
    i: int
    arg: "Pattern"
    pos: Pos = _pos()


Pattern = PVar | PUnit | PPair | PInj


@dataclass(frozen=True)
class Clause:
    pattern: Pattern
    body: "RTerm"


# -- terms ----------------------------------------------------------------------


@dataclass(frozen=True)
class RVar:
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class RLam:
    name: str
    ty: RType
    body: "RTerm"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RMatchLam:
    """``\\[T] { clauses }``; ``T`` may be an arrow to annotate the result."""

    ty: RType
    clauses: tuple[Clause, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class RApp:
    fun: "RTerm"
    arg: "RTerm"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RTuple:
    """``()`` and ``(a, b)``; ``angle`` selects ``<>`` and ``<a, b>``."""

    items: tuple
    angle: bool = False
    pos: Pos = _pos()


@dataclass(frozen=True)
class RPrefix:
    """``fst``, ``snd``, ``thunk``, ``force``, ``ret`` and the annotated
    ``inl[T]``, ``inr[T]``, ``abort[T]``."""

    op: str
    ann: RType | None
    arg: "RTerm"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RCase:
    scrut: "RTerm"
    lname: str
    left: "RTerm"
    rname: str
    right: "RTerm"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RLet:
    name: str
    ty: RType
    comp: "RTerm"
    body: "RTerm"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RSplit:
    val: "RTerm"
    fst: str
    snd: str
    body: "RTerm"
    pos: Pos = _pos()


@dataclass(frozen=True)
class RBind:
    ann: RType | None
    comp: "RTerm"
    clauses: tuple[Clause, ...]
    pos: Pos = _pos()


RTerm = RVar | RLam | RMatchLam | RApp | RTuple | RPrefix | RCase | RLet | RSplit | RBind


@dataclass(frozen=True)
class SourceFile:
    decls: tuple[tuple[str, RType], ...]
    term: RTerm
