from math import gcd

import pytest

from k2padic.exactlin import InvariantFactorGroup
from k2padic.pgroups import PGroupShape
from k2padic.structure import (
    TensorCyclicExpr,
    example1,
    example1_shape,
    example2,
    example2_shape,
    k2_cyclic_corollary,
    k2_cyclic_group_ring,
    k2_truncated_poly,
    k2c_closed,
    symbol_order,
    tensor_cyclic_identity_check,
)
from oracles import as_chain, coset_structure

GRID = [(p, s, n) for p in (2, 3, 5) for s in range(2, 6) for n in range(1, 5)]


def IFG(*fs):
    return InvariantFactorGroup(tuple(fs))


def tensor_oracle(q, summands):
    # Z/q (x) Z/m = Z/gcd(q, m), summed term by term
    return IFG(*as_chain([d for d in (gcd(q, m) for m in summands) if d > 1]))


def enumerate_k2c(G):
    orders = []
    for v in G.exponent_vectors:
        orders += coset_structure(G.moduli, [v], G.p)
    return IFG(*as_chain(orders))


@pytest.mark.parametrize("args,expected", [((2, 2, 2), (2,)), ((3, 2, 2), ()), ((2, 3, 4), (2, 4))])
def test_truncated_poly_examples(args, expected):
    assert k2_truncated_poly(*args) == IFG(*expected)


@pytest.mark.parametrize("args,expected", [((2, 2, 1), (2,)), ((3, 2, 1), (3,)), ((2, 2, 2), (2, 2))])
def test_cyclic_group_ring_examples(args, expected):
    assert k2_cyclic_group_ring(*args) == IFG(*expected)


def test_corollary_branches():
    assert k2_cyclic_corollary(2, 2, 2) == IFG(2, 2)
    assert k2_cyclic_corollary(2, 3, 1) == IFG(2)


@pytest.mark.parametrize("p,s,n", GRID)
def test_grid_against_term_by_term(p, s, n):
    want = tensor_oracle(p ** (s - 1), range(2, p ** n + 1))
    assert k2_cyclic_group_ring(p, s, n) == want
    assert k2_cyclic_corollary(p, s, n) == want
    assert all(p ** (s - 1) % d == 0 for d in want.factors)
    if n >= 2:
        assert k2_truncated_poly(p, s, n) == tensor_oracle(p ** (s - 1), range(2, n + 1))


def test_tensor_expr():
    assert TensorCyclicExpr(2, 3, (2, 3, 4, 8, 16)).evaluate() == IFG(2, 4, 8, 8)
    assert TensorCyclicExpr(3, 1, (2, 4)).evaluate() == InvariantFactorGroup.trivial()


def test_parameter_errors():
    with pytest.raises(ValueError):
        k2_cyclic_group_ring(4, 2, 1)
    with pytest.raises(ValueError):
        k2_cyclic_group_ring(2, 1, 1)
    with pytest.raises(ValueError):
        k2_truncated_poly(2, 2, 1)
    with pytest.raises(ValueError):
        example1(2, 0, 1)


@pytest.mark.parametrize("spec,expected", [("2:[1,1]", (2, 2, 2, 2, 2)), ("2:[2]", (2, 4)), ("2:[]", ())])
def test_k2c_closed_examples(spec, expected):
    assert k2c_closed(PGroupShape.parse(spec)) == IFG(*expected)


def test_example1_anchors():
    assert example1(2, 2, 1) == IFG(2, 2, 2, 2, 2)
    assert example1(2, 1, 2) == IFG(2, 4)
    assert example1(3, 1, 1) == IFG(3)


def test_example2_anchors():
    assert example2(2, 1, 1) == IFG(2, 2, 2, 2, 2)
    # r = 3 copies of Z/4, and the middle sum contributes r * phi(2) = 3 more Z/2
    assert example2(2, 1, 2) == IFG(*([2] * 7 + [4] * 3))


@pytest.mark.parametrize("p,k,n", [(2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (2, 2, 2), (2, 3, 1),
                                   (2, 1, 4), (3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 1)])
def test_example1_against_enumeration(p, k, n):
    assert example1(p, k, n) == enumerate_k2c(example1_shape(p, k, n))


@pytest.mark.parametrize("p,k,n", [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1), (2, 1, 3), (2, 2, 2)])
def test_example2_against_enumeration(p, k, n):
    assert example2(p, k, n) == enumerate_k2c(example2_shape(p, k, n))


@pytest.mark.parametrize("args,expected", [((3, 2, 9), 3), ((2, 4, 8), 8), ((3, 5, 2), 1)])
def test_symbol_order_examples(args, expected):
    assert symbol_order(*args) == expected


def test_symbol_order_is_tensor_order():
    for p in (2, 3, 5):
        for s in range(2, 6):
            for n in range(2, 30):
                assert symbol_order(p, s, n) == gcd(p ** (s - 1), n)


@pytest.mark.parametrize("p,s,n", [(p, s, n) for p in (2, 3) for s in range(2, 6) for n in range(1, 5)])
def test_identity_check(p, s, n):
    rep = tensor_cyclic_identity_check(p, s, n)
    assert rep.ok
    if p ** n <= 27:
        left = enumerate_k2c(PGroupShape(p, (n,)))
        assert rep.left == tensor_oracle(p ** (s - 1), left.factors)
