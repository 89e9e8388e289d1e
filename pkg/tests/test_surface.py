"""Surface language: lexing, parsing, elaboration, clause compilation, printing."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import laws
from nbe.cbpv import syntax as c
from nbe.errors import (
    NonAtomicVarPattern,
    NonExhaustivePatterns,
    OverlappingPatterns,
    ParseError,
    PolarityViolation,
    TypeMismatch,
    UnboundVariable,
)
from nbe.polarized import syntax as z
from nbe.stlc import syntax as s
from nbe.stlc.nbe import norm
from nbe.surface import dump, elaborate, parse, parse_type, pretty_nf, pretty_term, pretty_type
from nbe.surface.elaborate import elab_type

O = s.Atom()
SUM = s.Sum(O, O)
P = c.AtomP("p")


def elab(text, calculus="stlc"):
    return elaborate(parse(text, calculus), calculus)


# -- parsing and elaboration ----------------------------------------------------------


def test_codiagonal():
    ctx, t = elab(r"term \x:o+o. case x of { inl y -> y ; inr z -> z }")
    assert ctx == ()
    assert t == s.Abs(SUM, s.Case(s.Var(0), s.Var(0), s.Var(0)))


def test_unit():
    assert elab("term ()") == ((), s.Unit())


def test_de_bruijn():
    assert elab(r"term \x:o.\y:o. x")[1] == s.Abs(O, s.Abs(O, s.Var(1)))


def test_shadowing_picks_innermost():
    assert elab(r"term \x:o.\x:o. x")[1] == s.Abs(O, s.Abs(O, s.Var(0)))


def test_declarations_build_the_context():
    ctx, t = elab("var f : o -> o ;\nvar x : o ;\nterm f x")
    assert ctx == (s.Arr(O, O), O)
    assert t == s.App(s.Var(1), s.Var(0))


def test_unbound_variable():
    with pytest.raises(UnboundVariable) as info:
        elab(r"term \x:o. y")
    assert "'y'" in str(info.value)


def test_type_syntax():
    assert elab_type("stlc", parse_type("o -> o + o * o")) == s.Arr(O, s.Sum(O, s.Prod(O, O)))
    assert elab_type("stlc", parse_type("o -> o -> o")) == s.Arr(O, s.Arr(O, O))
    cbpv = elab_type("cbpv", parse_type("U (a+ p -> F 1) * a+ p"))
    assert cbpv == c.ProdP(c.Thunk(c.Arr(P, c.Comp(c.OneP()))), P)


def test_positive_atoms_need_names():
    assert elab(r"term \x:a+ p. ret x", "cbpv")[1] == c.Abs(P, c.Ret(c.Var(0)))


def test_polarity_is_checked():
    with pytest.raises(PolarityViolation):
        elab(r"term \x:o+o. case x of { inl y -> y ; inr z -> z }", "cbpv")


def test_values_are_not_computations():
    with pytest.raises(TypeMismatch):
        elab(r"term \x:U a- n. x", "cbpv")


def test_clauses_compile_to_branch():
    _, t = elab(r"term \[a+ p + a+ p] { inl a -> ret a | inr b -> ret b }", "polarized")
    leaf = z.HypP(P, c.Ret(c.Var(0)))
    assert t == z.Abs(c.SumP(P, P), z.Branch2(leaf, leaf))


def test_clauses_compile_nested_pairs():
    _, t = elab(r"term \[a+ p * (1 * a+ p)] { (a, ((), b)) -> ret (b, a) }", "polarized")
    body = z.HypP(P, z.Split2(z.Split0(z.HypP(P, c.Ret(c.PairP(c.Var(0), c.Var(1)))))))
    assert t.body == z.Split2(body)


def test_variable_pattern_at_product_is_rejected():
    with pytest.raises(NonAtomicVarPattern):
        elab(r"term \[a+ p * a+ p] { a -> ret a }", "polarized")


def test_missing_clause():
    with pytest.raises(NonExhaustivePatterns):
        elab(r"term \[a+ p + a+ p] { inl a -> ret a }", "polarized")


def test_redundant_clause():
    with pytest.raises(OverlappingPatterns):
        elab(r"term \[a+ p + a+ p] { inl a -> ret a | inr b -> ret b | inl c -> ret c }", "polarized")


def test_empty_match_on_zero():
    _, t = elab(r"term \[0 -> a- n] {}", "polarized")
    assert t.body == z.Branch0()


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        parse("var x : o ;\nterm \\y:o. (x", "stlc")
    assert (info.value.line, info.value.column) == (2, 14)


def test_invalid_utf8_is_a_parse_error():
    with pytest.raises(ParseError):
        parse(b"\xff\xfe", "stlc")


def test_duplicate_declaration():
    with pytest.raises(ParseError):
        parse("var x : o ;\nvar x : o ;\nterm x", "stlc")


def test_deep_nesting_is_a_parse_error():
    with pytest.raises(ParseError):
        parse("term " + "(" * 5000 + "()" + ")" * 5000, "stlc")


def test_comments_are_ignored():
    assert elab("-- a comment\nterm () -- trailing\n") == ((), s.Unit())


# -- printing -----------------------------------------------------------------------


def test_pretty_codiagonal_normal_form():
    t = s.Abs(SUM, s.Case(s.Var(0), s.Var(0), s.Var(0)))
    n = norm((), t)
    assert pretty_nf("stlc", (), s.Arr(SUM, O), n) == r"\x0:o+o. case x0 of { inl x1 -> x1 ; inr x2 -> x2 }"


def test_pretty_unit():
    assert pretty_term("stlc", s.Unit()) == "()"


def test_pretty_types():
    assert pretty_type(s.Arr(s.Arr(O, O), s.Prod(O, SUM))) == "(o -> o) -> o*(o+o)"
    assert pretty_type(c.Arr(c.Thunk(c.Comp(P)), c.Comp(c.SumP(P, c.OneP())))) == "U F a+ p -> F (a+ p + 1)"


def test_pretty_avoids_free_names():
    t = s.Abs(O, s.App(s.Var(1), s.Var(0)))
    assert pretty_term("stlc", t, (s.Arr(O, O),), ("x0",)) == r"\x1:o. x0 x1"


def test_dump():
    assert dump(s.NfNe(s.NeVar(0))) == "(NfNe (NeVar 0))"
    assert dump(s.Atom()) == '(Atom "o")'


# -- properties ------------------------------------------------------------------------


@pytest.mark.parametrize("calculus", ["stlc", "cbpv", "polarized"])
def test_roundtrip_small(calculus):
    assert laws.check_roundtrip(calculus, n=60, seed=11, size=25, type_depth=2) == 60


@settings(max_examples=300)
@given(st.binary(max_size=256), st.sampled_from(["stlc", "cbpv", "polarized"]))
def test_arbitrary_bytes_never_crash(data, calculus):
    laws.fuzz_once(data, calculus)


@settings(max_examples=300)
@given(st.integers(min_value=0, max_value=2**32), st.sampled_from(["stlc", "cbpv", "polarized"]))
def test_grammar_noise_never_crashes(seed, calculus):
    laws.fuzz_once(laws.fuzz_input(random.Random(seed)), calculus)
