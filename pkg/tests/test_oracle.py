"""Finite-model oracle, term generators and axiom instances."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbe.cbpv import syntax as c
from nbe.errors import DomainTooLarge, TypeMismatch
from nbe.oracle.axioms import SCHEMAS, gen_axiom_instance, subst, weaken
from nbe.oracle.finite import FFun, FInj, enum_envs, env_count, fin_eval, oracle_equiv, shape
from nbe.oracle.generate import gen_term
from nbe.pipeline import infer, size
from nbe.stlc import syntax as s
from nbe.stlc.nbe import norm

O = s.Atom()
SUM = s.Sum(O, O)
OO = s.Arr(O, O)
CODIAG = s.Abs(SUM, s.Case(s.Var(0), s.Var(0), s.Var(0)))


# -- evaluation ---------------------------------------------------------------------


def test_codiagonal_table():
    # domain order: inl 0, inl 1, inr 0, inr 1
    assert fin_eval("stlc", (), CODIAG) == FFun(shape(SUM), (0, 1, 0, 1))


def test_unit_and_variable():
    assert fin_eval("stlc", (), s.Unit()) == ()
    assert fin_eval("stlc", (O,), s.Var(0), env=(1,)) == 1
    assert fin_eval("stlc", (O, SUM), s.Var(0), env=(1, FInj(2, 0))) == FInj(2, 0)


def test_env_length_is_checked():
    with pytest.raises(TypeMismatch):
        fin_eval("stlc", (O,), s.Var(0), env=())


def test_environment_counts():
    assert list(enum_envs(())) == [()]
    assert len(list(enum_envs((O,)))) == env_count((O,)) == 2
    assert len(list(enum_envs((SUM, s.One())))) == env_count((SUM, s.One())) == 4


def test_environments_are_distinct():
    envs = list(enum_envs((OO, SUM), 2))
    assert len(envs) == len(set(envs)) == 4 * 4


def test_domain_too_large():
    big = s.Arr(s.Arr(OO, OO), O)
    with pytest.raises(DomainTooLarge):
        list(enum_envs((big,), 3))
    with pytest.raises(DomainTooLarge):
        oracle_equiv("stlc", (big,), s.Var(0), s.Var(0), 3)


# -- equivalence ----------------------------------------------------------------------


def test_reflexive():
    assert oracle_equiv("stlc", (), CODIAG, CODIAG)


def test_eta_for_functions():
    assert oracle_equiv("stlc", (OO,), s.Var(0), s.Abs(O, s.App(s.Var(1), s.Var(0))))


def test_distinct_injections():
    one = s.One()
    t1 = s.Inj(1, one, s.Unit())
    t2 = s.Inj(2, one, s.Unit())
    assert not oracle_equiv("stlc", (), t1, t2)


def test_type_mismatch_is_reported():
    with pytest.raises(TypeMismatch):
        oracle_equiv("stlc", (O,), s.Var(0), s.Unit())


def test_cbpv_shifts_are_invisible():
    p = c.AtomP("p")
    t = c.Abs(p, c.Ret(c.Var(0)))
    eta = c.Abs(p, c.Bind(p, c.Ret(c.Var(0)), c.Ret(c.Var(0))))
    assert oracle_equiv("cbpv", (), t, eta)


def test_distinguishes_projections():
    ctx = (s.Prod(O, O),)
    assert not oracle_equiv("stlc", ctx, s.Prj(1, s.Var(0)), s.Prj(2, s.Var(0)))


# -- generators -------------------------------------------------------------------------


@pytest.mark.parametrize("calculus", ["stlc", "cbpv", "polarized"])
def test_smallest_term_is_unit(calculus):
    ctx, t = gen_term(calculus, 3, 1, 0)
    assert ctx == () and size(calculus, t) == 1


@pytest.mark.parametrize("calculus", ["stlc", "cbpv", "polarized"])
def test_generation_is_deterministic(calculus):
    assert gen_term(calculus, 42, 30, 3) == gen_term(calculus, 42, 30, 3)
    assert gen_term(calculus, 42, 30, 3) != gen_term(calculus, 43, 30, 3)


def test_generator_rejects_bad_bounds():
    with pytest.raises(ValueError):
        gen_term("stlc", 0, 0, 2)


@settings(max_examples=200)
@given(
    st.sampled_from(["stlc", "cbpv", "polarized"]),
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=1, max_value=40),
    st.integers(min_value=0, max_value=3),
)
def test_generated_terms_typecheck_within_bound(calculus, seed, bound, depth):
    ctx, t = gen_term(calculus, seed, bound, depth)
    infer(calculus, ctx, t)
    assert size(calculus, t) <= bound
    assert len(ctx) <= 3


# -- substitution and axiom instances ------------------------------------------------------


def test_subst_replaces_and_closes_gap():
    # (\z. x z)[y/x] in context (y, x)
    t = s.Abs(O, s.App(s.Var(1), s.Var(0)))
    assert subst(t, s.Var(0), 1) == s.Abs(O, s.App(s.Var(1), s.Var(0)))
    assert subst(s.Pair(s.Var(1), s.Var(0)), s.Unit(), 1) == s.Pair(s.Var(0), s.Unit())


def test_weaken_under_binders():
    assert weaken(s.Abs(O, s.Pair(s.Var(0), s.Var(1))), 1) == s.Abs(O, s.Pair(s.Var(0), s.Var(2)))


def test_schema_catalogue():
    assert len(SCHEMAS) == 16


def test_eta_one_instance():
    ctx, lhs, rhs = gen_axiom_instance("eta_one", 0)
    assert rhs == s.Unit() and s.infer(ctx, lhs) == s.One()


def test_beta_prod_instance():
    ctx, lhs, rhs = gen_axiom_instance("beta_prod", 0)
    assert isinstance(lhs, s.Prj) and isinstance(lhs.arg, s.Pair)
    assert rhs == (lhs.arg.fst if lhs.i == 1 else lhs.arg.snd)


def test_pi_zero_zero_instance():
    ctx, lhs, rhs = gen_axiom_instance("pi_zero_zero", 0)
    assert lhs == s.Abort(rhs.result, s.Abort(s.Zero(), rhs.arg))


@pytest.mark.parametrize("name", sorted(SCHEMAS))
def test_axioms_hold_in_the_model(name):
    for seed in range(5):
        ctx, lhs, rhs = gen_axiom_instance(name, seed)
        assert s.term_size(lhs) <= 25
        try:
            assert oracle_equiv("stlc", ctx, lhs, rhs)
        except DomainTooLarge:
            continue
        assert norm(ctx, lhs) == norm(ctx, rhs)


# -- free-variable restriction ----------------------------------------------------------


def test_free_vars():
    from nbe.oracle.finite import free_vars

    assert free_vars(s.Abs(O, s.App(s.Var(2), s.Var(0)))) == {1}
    assert free_vars(s.Case(s.Var(3), s.Var(0), s.Var(1))) == {3, 0}


def test_unused_huge_variable_is_not_enumerated():
    big = s.Arr(s.Arr(OO, OO), O)
    assert oracle_equiv("stlc", (big, O), s.Var(0), s.Var(0), 2)
    with pytest.raises(DomainTooLarge):
        oracle_equiv("stlc", (big, O), s.Var(1), s.Var(1), 2)


def test_uninhabited_unused_variable_is_vacuous():
    assert oracle_equiv("stlc", (s.Zero(), O), s.Var(0), s.Var(0))
