"""Presented abelian groups for ``HC_1(Z_p[G])``, ``H~_2(G)`` and ``Omega/dI``.

All three modules are finite p-groups, so ``Z_p``-coefficients only enter
through p-power torsion relations and everything stays over ``Z``.

Coordinates
-----------
``HC_1``: generator ``(h, i)`` is ``g_i (x) h`` (the i-th coordinate of the
copy of ``G`` sitting over the basis element ``h`` of ``Z_p[G]``); vector
index ``h_index * k + i``.

``H~_2``: generator ``(i, j)`` is ``g_i ^~ g_j``; index ``i * k + j``.

``Omega/dI``: generator ``(h, i)`` is ``h dg_i``; index ``h_index * k + i``.
"""

from __future__ import annotations

from functools import lru_cache

from .exactlin import InvariantFactorGroup, PresentedAbGroup, direct_sum
from .pgroups import GroupElement, PGroupShape, enumerate_group, quotient_by_cyclic


class _Context:
    shape: PGroupShape
    presentation: PresentedAbGroup

    @property
    def structure(self) -> InvariantFactorGroup:
        return self.presentation.structure

    @property
    def order(self) -> int:
        return self.presentation.order

    @property
    def ngens(self) -> int:
        return self.presentation.ngens

    @property
    def relation_shape(self) -> tuple[int, int]:
        return self.presentation.relations.shape

    def zero(self) -> list[int]:
        return [0] * self.ngens

    def reduce(self, v) -> tuple[int, ...]:
        return self.presentation.reduce(v)

    def is_zero(self, v) -> bool:
        return self.presentation.is_zero(v)

    def equal(self, v, w) -> bool:
        return self.presentation.equal(v, w)

    def element_order(self, v) -> int:
        return self.presentation.element_order(v)

    def subgroup_order(self, gens) -> int:
        return self.presentation.subgroup_order(gens)


class Hc1Context(_Context):
    """``(G (x) Z_p[G]) / <g (x) lam g>``."""

    def __init__(self, shape: PGroupShape):
        shape.check_cap()
        self.shape = shape
        k, n = shape.rank, shape.order
        vecs = shape.exponent_vectors
        labels = [(h, i) for h in range(n) for i in range(k)]
        rels = []
        for h in range(n):
            for i, m in enumerate(shape.moduli):
                col = [0] * (n * k)
                col[h * k + i] = m
                rels.append(col)
        for g in range(n):
            col = [0] * (n * k)
            for i, a in enumerate(vecs[g]):
                col[g * k + i] = a
            rels.append(col)
        self.presentation = PresentedAbGroup.from_relations(labels, rels)

    def index(self, h: int, i: int) -> int:
        return h * self.shape.rank + i

    def tensor(self, g: GroupElement, coeffs) -> list[int]:
        """Coordinates of ``g (x) sum_h c_h h`` for integer coefficients ``c_h`` in enumeration order."""
        k = self.shape.rank
        v = self.zero()
        for h, c in enumerate(coeffs):
            if c:
                for i, a in enumerate(g.exps):
                    if a:
                        v[h * k + i] += c * a
        return v

    def triple(self, g: GroupElement, lam: int, h: GroupElement) -> list[int]:
        """Coordinates of ``g (x) lam h``."""
        c = [0] * self.shape.order
        c[h.index] = lam
        return self.tensor(g, c)


class H2Context(_Context):
    """``G (x) G / <g (x) h + h (x) g>`` from generator-pair relations."""

    def __init__(self, shape: PGroupShape):
        self.shape = shape
        k = shape.rank
        labels = [(i, j) for i in range(k) for j in range(k)]
        rels = []
        for i in range(k):
            for j in range(k):
                col = [0] * (k * k)
                col[i * k + j] = shape.p ** min(shape.exponents[i], shape.exponents[j])
                rels.append(col)
        for i in range(k):
            for j in range(i, k):
                col = [0] * (k * k)
                col[i * k + j] += 1
                col[j * k + i] += 1
                rels.append(col)
        self.presentation = PresentedAbGroup.from_relations(labels, rels)

    def wedge(self, g: GroupElement, h: GroupElement) -> list[int]:
        """Coordinates of ``g ^~ h`` (bilinear expansion)."""
        k = self.shape.rank
        v = self.zero()
        for i, a in enumerate(g.exps):
            if a:
                for j, b in enumerate(h.exps):
                    if b:
                        v[i * k + j] += a * b
        return v


def h2_full_presentation(shape: PGroupShape) -> PresentedAbGroup:
    """``H~_2`` with one symmetrization relation for every pair ``(g, h)`` of elements.

    Quadratic in ``|G|``; used to cross-check the generator-pair presentation.
    """
    shape.check_cap()
    ctx = H2Context(shape)
    k = shape.rank
    rels = [list(ctx.presentation.relations.column(j)) for j in range(k * k)]
    els = shape.elements()
    for a, g in enumerate(els):
        for h in els[a:]:
            rels.append([x + y for x, y in zip(ctx.wedge(g, h), ctx.wedge(h, g))])
    return PresentedAbGroup.from_relations(ctx.presentation.labels, rels)


class KaehlerContext(_Context):
    """``Omega_{R/Z_p} / dR`` for ``R = Z_p[G]``.

    ``Omega`` is free over ``R/p^{e_i}`` on ``dg_i``; ``dR = dI`` is spanned by
    ``d(g) = sum_i a_i g g_i^{-1} dg_i`` (product rule).
    """

    def __init__(self, shape: PGroupShape):
        shape.check_cap()
        self.shape = shape
        k, n = shape.rank, shape.order
        vecs = shape.exponent_vectors
        labels = [(h, i) for h in range(n) for i in range(k)]
        rels = []
        for h in range(n):
            for i, m in enumerate(shape.moduli):
                col = [0] * (n * k)
                col[h * k + i] = m
                rels.append(col)
        for g in range(n):
            col = [0] * (n * k)
            for i, a in enumerate(vecs[g]):
                if a:
                    exps = list(vecs[g])
                    exps[i] -= 1
                    col[shape.index(exps) * k + i] += a
            rels.append(col)
        self.presentation = PresentedAbGroup.from_relations(labels, rels)

    def index(self, h: int, i: int) -> int:
        return h * self.shape.rank + i


@lru_cache(maxsize=256)
def hc1_presentation(shape: PGroupShape) -> Hc1Context:
    return Hc1Context(shape)


@lru_cache(maxsize=256)
def h2_tilde(shape: PGroupShape) -> H2Context:
    return H2Context(shape)


@lru_cache(maxsize=256)
def kaehler_presentation(shape: PGroupShape) -> KaehlerContext:
    return KaehlerContext(shape)


def kaehler_mod_dI(shape: PGroupShape) -> InvariantFactorGroup:
    return kaehler_presentation(shape).structure


@lru_cache(maxsize=256)
def hc1_closed(shape: PGroupShape) -> InvariantFactorGroup:
    """``sum over g in G of G/<g>``."""
    return direct_sum(quotient_by_cyclic(shape, g) for g in enumerate_group(shape))
