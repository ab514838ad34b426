import random

import pytest

from k2padic.exactlin import InvariantFactorGroup
from k2padic.homology import (
    h2_full_presentation,
    h2_tilde,
    hc1_closed,
    hc1_presentation,
    kaehler_mod_dI,
    kaehler_presentation,
)
from k2padic.pgroups import PGroupShape, all_shapes
from oracles import as_chain, coset_structure, sympy_cokernel


def IFG(*fs):
    return InvariantFactorGroup(tuple(fs))


def S(spec):
    return PGroupShape.parse(spec)


TRIVIAL = PGroupShape(2, ())


@pytest.mark.parametrize("spec,expected", [
    ("2:[1]", (2,)), ("2:[2]", (2, 4)), ("2:[1,1]", (2, 2, 2, 2, 2)), ("3:[1]", (3,)),
    ("5:[1]", (5,)),
])
def test_hc1_examples(spec, expected):
    G = S(spec)
    assert hc1_presentation(G).structure == IFG(*expected)
    assert hc1_closed(G) == IFG(*expected)
    assert kaehler_mod_dI(G) == IFG(*expected)


def test_trivial_group():
    assert hc1_presentation(TRIVIAL).structure == InvariantFactorGroup.trivial()
    assert hc1_closed(TRIVIAL) == InvariantFactorGroup.trivial()
    assert kaehler_mod_dI(TRIVIAL) == InvariantFactorGroup.trivial()
    assert h2_tilde(TRIVIAL).order == 1


def test_relation_count():
    for G in all_shapes(2, 16):
        r, c = hc1_presentation(G).relation_shape
        assert r == G.rank * G.order and c == G.rank * G.order + G.order


def _closed_by_enumeration(G):
    # sum over h of G/<h>, each quotient found by coset enumeration
    orders = []
    for v in G.exponent_vectors:
        orders += coset_structure(G.moduli, [v], G.p)
    return IFG(*as_chain(orders))


@pytest.mark.parametrize("G", list(all_shapes(2, 32)) + list(all_shapes(3, 27)) + [S("5:[1]")],
                         ids=str)
def test_hc1_against_enumeration_and_sympy(G):
    want = _closed_by_enumeration(G)
    ctx = hc1_presentation(G)
    assert ctx.structure == want
    assert hc1_closed(G) == want
    rel = ctx.presentation.relations
    rows = rel.to_list()
    tors, free = sympy_cokernel(rows, rel.rows)
    assert free == 0 and IFG(*tors) == want


def test_kaehler_against_sympy():
    for G in [S("2:[2,1]"), S("3:[1,1]"), S("2:[3]")]:
        rel = kaehler_presentation(G).presentation.relations
        tors, free = sympy_cokernel(rel.to_list(), rel.rows)
        assert free == 0 and IFG(*tors) == kaehler_mod_dI(G) == hc1_closed(G)


@pytest.mark.parametrize("spec,expected", [
    ("2:[1]", (2,)), ("3:[1]", ()), ("5:[1]", ()), ("2:[1,1]", (2, 2, 2)), ("2:[2]", (2,)), ("3:[1,1]", (3,)),
])
def test_h2_examples(spec, expected):
    assert h2_tilde(S(spec)).structure == IFG(*expected)


def test_h2_full_vs_generator_pairs():
    for G in list(all_shapes(2, 16)) + list(all_shapes(3, 27)):
        assert h2_full_presentation(G).structure == h2_tilde(G).structure


def test_h2_divides_hc1():
    for G in list(all_shapes(2, 64)) + list(all_shapes(3, 81)):
        assert hc1_presentation(G).order % h2_tilde(G).order == 0


def test_antisymmetry_in_hc1():
    rnd = random.Random(0)
    for G in [S("2:[1,1]"), S("2:[2,1]"), S("3:[1,1]"), S("3:[2]")]:
        ctx = hc1_presentation(G)
        els = G.elements()
        for _ in range(30):
            g1, g2 = rnd.choice(els), rnd.choice(els)
            lam = rnd.randrange(1, 50)
            # lam g1 (x) g2 + lam g2 (x) g1 in the copy over the element g1 g2
            h = g1 * g2
            v = [a + b for a, b in zip(ctx.triple(g1, lam, h), ctx.triple(g2, lam, h))]
            assert ctx.is_zero(v)


def test_tensor_relation_is_zero():
    G = S("2:[2,1]")
    ctx = hc1_presentation(G)
    for g in G.elements():
        assert ctx.is_zero(ctx.triple(g, 7, g))


def test_cap_enforced(monkeypatch):
    from k2padic.pgroups import GroupTooLarge
    monkeypatch.setenv("K2PADIC_MAX_ORDER", "8")
    with pytest.raises(GroupTooLarge):
        hc1_presentation.__wrapped__(S("2:[4]"))
