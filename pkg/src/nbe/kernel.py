"""Contexts, de Bruijn indices and order-preserving embeddings.

A context is a tuple of types in snoc order: the *last* entry is bound by
index 0.  An :class:`OPE` witnesses ``source ⊆ target``.  Its spine lists
the constructors from the outside in, so ``spine[0]`` decides what happens
to index 0 of the target:

* ``LIFT`` keeps the innermost entry on both sides,
* ``WEAK`` skips the innermost entry of the target.

Every syntactic and semantic family in the package implements
``rename(tau)``; :func:`rename` is the single entry point.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Any, Sequence

from .errors import ContextMismatch, IndexOutOfRange

Ctx = tuple

LIFT = True
WEAK = False


@dataclass(frozen=True)
class OPE:
    spine: tuple[bool, ...]
    source: Ctx
    target: Ctx

    def __post_init__(self):
        lifts = sum(1 for s in self.spine if s)
        if len(self.spine) != len(self.target) or lifts != len(self.source):
            raise ContextMismatch(
                f"spine of length {len(self.spine)} with {lifts} lifts does not "
                f"embed a context of length {len(self.source)} into one of "
                f"length {len(self.target)}"
            )

    @cached_property
    def table(self) -> tuple[int, ...]:
        """``table[x]`` is the image of source index ``x``."""
        out = []
        for pos, step in enumerate(self.spine):
            if step:
                out.append(pos)
        return tuple(out)

    @cached_property
    def is_identity(self) -> bool:
        return all(self.spine)

    def __str__(self) -> str:
        return "·".join(["Lift" if s else "Weak" for s in self.spine] + ["Empty"])


def ope_id(ctx: Sequence) -> OPE:
    ctx = tuple(ctx)
    return OPE((LIFT,) * len(ctx), ctx, ctx)


def ope_empty() -> OPE:
    return OPE((), (), ())


def lift(tau: OPE, ty: Any) -> OPE:
    """``lift tau : source.ty ⊆ target.ty``."""
    return OPE((LIFT,) + tau.spine, tau.source + (ty,), tau.target + (ty,))


def weak(tau: OPE, ty: Any) -> OPE:
    """``weak tau : source ⊆ target.ty``."""
    return OPE((WEAK,) + tau.spine, tau.source, tau.target + (ty,))


def wk(ctx: Sequence, ty: Any) -> OPE:
    """The singleton weakening ``ctx ⊆ ctx.ty``, i.e. ``weak id``."""
    return weak(ope_id(ctx), ty)


def ope_compose(tau1: OPE, tau2: OPE) -> OPE:
    """Diagrammatic composition: first ``tau1``, then ``tau2``."""
    if tau1.target != tau2.source:
        raise ContextMismatch(
            f"cannot compose {tau1} with {tau2}: intermediate contexts differ"
        )
    if tau1.is_identity:
        return tau2
    if tau2.is_identity:
        return tau1
    spine = []
    i = 0
    for step in tau2.spine:
        if not step:
            spine.append(WEAK)
        else:
            spine.append(tau1.spine[i])
            i += 1
    return OPE(tuple(spine), tau1.source, tau2.target)


def reindex(tau: OPE, x: int) -> int:
    if not 0 <= x < len(tau.source):
        raise IndexOutOfRange(f"index {x} not valid in a context of length {len(tau.source)}")
    return tau.table[x]


def lookup(ctx: Sequence, x: int):
    if not 0 <= x < len(ctx):
        raise IndexOutOfRange(f"index {x} not valid in a context of length {len(ctx)}")
    return ctx[len(ctx) - 1 - x]


def lift_table(table: tuple[int, ...], n: int = 1) -> tuple[int, ...]:
    """Index table under ``n`` additional binders."""
    return tuple(range(n)) + tuple(i + n for i in table)


def rename(tau: OPE, item):
    """Transport ``item`` along ``tau``; dispatches to ``item.rename``."""
    if isinstance(item, tuple):
        return tuple(rename(tau, x) for x in item)
    if item is None:
        return None
    return item.rename(tau)
