"""Tokenizer.  Comments run from ``--`` to the end of the line."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset(
    "case of inl inr abort fst snd thunk force ret let in split as bind var term".split()
)

# longest symbols first
SYMBOLS = ("->", "<-", "\\", ":", ".", "(", ")", ",", "[", "]", "{", "}", ";", "|", "<", ">", "+", "*", "&")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "kw", "sym", "num", "atom+", "atom-", "eof"
    text: str
    line: int
    col: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        m = _IDENT.match(text, i)
        if m:
            word = m.group()
            # polarized atoms: a+ NAME / a- NAME (but not "a ->")
            if word == "a" and m.end() < n:
                nxt = text[m.end()]
                after = text[m.end() + 1] if m.end() + 1 < n else ""
                if nxt == "+" or (nxt == "-" and after not in ">-"):
                    toks.append(Token("atom" + nxt, "a" + nxt, line, col))
                    i, col = i + 2, col + 2
                    continue
            toks.append(Token("kw" if word in KEYWORDS else "ident", word, line, col))
            i, col = m.end(), col + len(word)
            continue
        if ch in "01":
            if i + 1 < n and (text[i + 1].isalnum() or text[i + 1] == "_"):
                raise ParseError(f"unexpected character {text[i + 1]!r}", line, col + 1)
            toks.append(Token("num", ch, line, col))
            i, col = i + 1, col + 1
            continue
        for sym in SYMBOLS:
            if text.startswith(sym, i):
                toks.append(Token("sym", sym, line, col))
                i, col = i + len(sym), col + len(sym)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks
