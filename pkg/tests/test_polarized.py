"""The focused calculus: pattern trees, the slim cover monad, match and norm."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import laws
from nbe.cbpv import syntax as c
from nbe.errors import DomainTooLarge, InvalidNormalForm, ShapeMismatch
from nbe.kernel import ope_compose, ope_id, wk
from nbe.oracle.finite import oracle_equiv
from nbe.oracle.generate import gen_term
from nbe.polarized import nbe as pn
from nbe.polarized import syntax as z
from nbe.values import VPair, VUnit

P = c.AtomP("p")
ONE, ZERO = c.OneP(), c.ZeroP()
TOP2 = c.With(c.Top(), c.Top())


# -- pattern trees ------------------------------------------------------------------


def test_add_stmap_examples():
    ctx = (P,)
    seen = []

    def leaf(sigma, j):
        seen.append(sigma)
        return j + 1

    ident = ope_id(ctx)
    assert z.add_stmap(ident, z.Branch0(), leaf) == z.Branch0()
    assert z.add_stmap(ident, z.Split0(1), leaf) == z.Split0(2)
    assert seen.pop() == ident
    assert z.add_stmap(ident, z.HypP(P, 1), leaf) == z.HypP(P, 2)
    assert seen.pop() == wk(ctx, P)


def test_cov_join_examples():
    inner = z.CovBind(z.NeVar(0), ONE, z.Split0(z.CovReturn("j")))
    assert pn.cov_join(z.CovReturn(inner)) == inner
    u = pn.CovBind(c.NeForce(0), ONE, z.Split0(z.CovReturn(z.CovReturn("j"))))
    assert pn.cov_join(u) == pn.CovBind(c.NeForce(0), ONE, z.Split0(z.CovReturn("j")))


def test_reflect_cont_zero_and_one():
    assert pn.reflect_cont((), ZERO, lambda tau, a: (tau, a)) == z.Branch0()
    assert pn.reflect_cont((), ONE, lambda tau, a: (tau, a)) == z.Split0((ope_id(()), VUnit()))


def test_reflect_cont_atom_pair():
    ctx = ()
    got = pn.reflect_cont(ctx, c.ProdP(P, P), lambda tau, a: (tau, a))
    tau = ope_compose(wk(ctx, P), wk((P,), P))
    expect = z.Split2(z.HypP(P, z.HypP(P, (tau, VPair(pn.VAtomP(1), pn.VAtomP(0))))))
    assert got == expect


def test_match_examples():
    e1 = z.HypP(P, lambda g: ("left", g))
    e2 = z.Split0(lambda g: ("right", g))
    tree = z.Branch2(e1, e2)
    a1 = pn.VAtomP(3)
    assert pn.match(pn.VInj(1, a1), tree, ("g",)) == pn.match(a1, e1, ("g",)) == ("left", ("g", a1))
    assert pn.match(VUnit(), e2, ("g",)) == ("right", ("g",))


def test_match_rejects_wrong_shape():
    with pytest.raises(ShapeMismatch):
        pn.match(VUnit(), z.Branch2(z.Branch0(), z.Branch0()), ())


def test_id_env_positive_atom():
    assert pn.id_env((P,)) == (pn.VAtomP(0),)
    assert pn.id_env((P, P)) == (pn.VAtomP(1), pn.VAtomP(0))


# -- the normalizer -------------------------------------------------------------------


def test_norm_eta_expands_with():
    assert pn.norm((TOP2,), z.VarN(0)) == c.NfPair(c.NfUnit(), c.NfUnit())


def test_norm_abs_over_sum():
    dom = c.SumP(P, ONE)
    body = z.Branch2(
        z.HypP(P, c.Ret(c.Inj(1, ONE, c.Var(0)))),
        z.Split0(c.Ret(c.Inj(2, P, c.UnitP()))),
    )
    n = pn.norm((), z.Abs(dom, body))
    expect = z.NfAbs(
        dom,
        z.Branch2(
            z.HypP(P, c.NfRet(z.CovReturn(c.VnfInj(1, c.VnfVar(0))))),
            z.Split0(c.NfRet(z.CovReturn(c.VnfInj(2, c.VnfUnit())))),
        ),
    )
    assert n == expect
    z.check_nf((), c.Arr(dom, c.Comp(dom)), n)


def test_check_nf_rejects_incomplete_fringe():
    dom = c.SumP(P, ONE)
    bad = z.NfAbs(dom, z.HypP(P, c.NfRet(z.CovReturn(c.VnfVar(0)))))
    with pytest.raises(InvalidNormalForm):
        z.check_nf((), c.Arr(dom, c.Comp(P)), bad)


# -- laws on small instances ------------------------------------------------------------


def test_add_laws_small():
    assert laws.check_add_laws(laws.pos_types(1)) > 0


def test_slim_laws_small():
    assert laws.check_slim_laws(1) > 0


def test_match_reflect_small():
    assert laws.check_match_reflect(laws.pos_types(1, atoms=(laws.P_ATOM,))) > 0


SEEDS = st.integers(min_value=0, max_value=10**6)


@settings(max_examples=120)
@given(SEEDS)
def test_norm_valid_and_idempotent(seed):
    ctx, t = gen_term("polarized", seed, 25, 2)
    ty = z.infer_tm(ctx, t)
    n = pn.norm(ctx, t)
    z.check_nf(ctx, ty, n)
    assert pn.norm(ctx, z.erase(ctx, ty, n)) == n


@settings(max_examples=80)
@given(SEEDS)
def test_norm_sound_in_finite_model(seed):
    ctx, t = gen_term("polarized", seed, 20, 2)
    ty = z.infer_tm(ctx, t)
    back = z.erase(ctx, ty, pn.norm(ctx, t))
    try:
        assert oracle_equiv("polarized", ctx, t, back)
    except DomainTooLarge:
        pass
