"""Concrete syntax for the three calculi."""

from .ast import SourceFile
from .elaborate import CALCULI, compile_clauses, elaborate, names_of
from .parser import parse, parse_term, parse_type
from .pretty import dump, pretty, pretty_file, pretty_nf, pretty_term, pretty_type

__all__ = [
    "CALCULI", "SourceFile", "compile_clauses", "dump", "elaborate", "names_of",
    "parse", "parse_term", "parse_type", "pretty", "pretty_file", "pretty_nf",
    "pretty_term", "pretty_type",
]
