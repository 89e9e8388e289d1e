"""Semantic values shared by the three normalizers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .kernel import OPE, ope_compose, ope_id, rename


@dataclass(frozen=True)
class VUnit:
    def rename(self, tau):
        return self


@dataclass(frozen=True)
class VPair:
    fst: object
    snd: object

    def rename(self, tau):
        return VPair(rename(tau, self.fst), rename(tau, self.snd))


@dataclass(frozen=True, eq=False)
class VFun:
    """Kripke function.

    ``fn(tau, a)`` expects ``tau : ctx0 ⊆ Δ`` where ``ctx0`` is the context
    the function was built in.  Renaming only accumulates ``acc``.
    """

    fn: Callable
    acc: OPE

    @property
    def ctx(self):
        return self.acc.target

    def apply(self, tau: OPE, a):
        return self.fn(ope_compose(self.acc, tau), a)

    def rename(self, tau):
        return VFun(self.fn, ope_compose(self.acc, tau))


def vfun(ctx, fn) -> VFun:
    return VFun(fn, ope_id(ctx))
