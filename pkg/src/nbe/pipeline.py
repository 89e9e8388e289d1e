"""Calculus-generic entry points: infer, normalize, validate, erase."""

from __future__ import annotations

from dataclasses import dataclass

from .cbpv import nbe as cbpv_nbe
from .cbpv import syntax as cbpv_syn
from .polarized import nbe as pol_nbe
from .polarized import syntax as pol_syn
from .stlc import nbe as stlc_nbe
from .stlc import syntax as stlc_syn
from .stlc.cover import MONADS

CALCULI = ("stlc", "cbpv", "polarized")


def infer(calculus: str, ctx: tuple, t):
    if calculus == "stlc":
        return stlc_syn.infer(ctx, t)
    if calculus == "cbpv":
        return cbpv_syn.infer_tm(ctx, t)
    if calculus == "polarized":
        return pol_syn.infer_tm(pol_syn.check_ctx(ctx), t)
    raise ValueError(f"unknown calculus {calculus!r}")


def normalize(calculus: str, ctx: tuple, t, monad: str = "free"):
    """Return ``(type, normal form)``."""
    ty = infer(calculus, ctx, t)
    if calculus == "stlc":
        return ty, stlc_nbe.norm(ctx, t, MONADS[monad])
    if monad != "free":
        raise ValueError("the monad choice only applies to the STLC")
    mod = cbpv_nbe if calculus == "cbpv" else pol_nbe
    return ty, mod.norm(ctx, t)


def validate(calculus: str, ctx: tuple, ty, n) -> None:
    """Raise :class:`InvalidNormalForm` unless ``n`` is a normal form of ``ty``."""
    {"stlc": stlc_syn, "cbpv": cbpv_syn, "polarized": pol_syn}[calculus].check_nf(ctx, ty, n)


def erase(calculus: str, ctx: tuple, ty, n):
    if calculus == "stlc":
        return stlc_syn.erase(n)
    return {"cbpv": cbpv_syn, "polarized": pol_syn}[calculus].erase(ctx, ty, n)


def size(calculus: str, t) -> int:
    return {"stlc": stlc_syn, "cbpv": cbpv_syn, "polarized": pol_syn}[calculus].term_size(t)


@dataclass(frozen=True)
class Normalized:
    ctx: tuple
    ty: object
    nf: object

    def term(self, calculus: str):
        return erase(calculus, self.ctx, self.ty, self.nf)


def run(calculus: str, ctx: tuple, t, monad: str = "free", check: bool = True) -> Normalized:
    """Normalize and (by default) validate the result."""
    ty, n = normalize(calculus, ctx, t, monad)
    if check:
        validate(calculus, ctx, ty, n)
    return Normalized(tuple(ctx), ty, n)
