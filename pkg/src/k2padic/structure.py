"""Closed-form structure formulas for reduced ``K_2`` and their counting cross-checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .exactlin import InvariantFactorGroup
from .homology import hc1_closed
from .padic import vp
from .pgroups import PGroupShape, is_prime


def _check_prime(p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


def _totient_pp(p: int, m: int) -> int:
    """``phi(p^m)``."""
    return 1 if m == 0 else (p - 1) * p ** (m - 1)


@dataclass(frozen=True)
class TensorCyclicExpr:
    """``Z/p^t (x) (Z/m_1 + Z/m_2 + ...)`` with each ``m_j >= 1``."""

    p: int
    t: int
    summands: tuple[int, ...]

    def evaluate(self) -> InvariantFactorGroup:
        # Z/p^t (x) Z/m = Z/p^min(t, v_p(m))
        return InvariantFactorGroup.from_orders(
            self.p ** min(self.t, vp(m, self.p)) for m in self.summands)


def _params(p, s, n, min_n):
    _check_prime(p)
    if s < 2:
        raise ValueError(f"need s >= 2, got s = {s}")
    if n < min_n:
        raise ValueError(f"need n >= {min_n}, got n = {n}")


def k2_truncated_poly(p: int, s: int, n: int) -> InvariantFactorGroup:
    """Reduced ``K_2`` of ``(Z/p^s)[x]/(x^n)``: ``Z/p^(s-1) (x) (Z/2 + ... + Z/n)``."""
    _params(p, s, n, 2)
    return TensorCyclicExpr(p, s - 1, tuple(range(2, n + 1))).evaluate()


def k2_cyclic_group_ring(p: int, s: int, n: int) -> InvariantFactorGroup:
    """Reduced ``K_2`` of ``(Z/p^s)[C_{p^n}]``: ``Z/p^(s-1) (x) (Z/2 + ... + Z/p^n)``."""
    _params(p, s, n, 1)
    return TensorCyclicExpr(p, s - 1, tuple(range(2, p ** n + 1))).evaluate()


def k2_cyclic_corollary(p: int, s: int, n: int) -> InvariantFactorGroup:
    """The same group through the totient count of multiples of each ``p^i`` up to ``p^n``."""
    _params(p, s, n, 1)
    orders: list[int] = []
    if n <= s - 1:
        for i in range(1, n + 1):
            orders += [p ** i] * _totient_pp(p, n - i)
    else:
        for i in range(1, s - 1):
            orders += [p ** i] * _totient_pp(p, n - i)
        orders += [p ** (s - 1)] * p ** (n - s + 1)
    return InvariantFactorGroup.from_orders(orders)


def k2c_closed(shape: PGroupShape) -> InvariantFactorGroup:
    """Continuous reduced ``K_2`` of ``Z_p[G]``, i.e. ``HC_1``."""
    return hc1_closed(shape)


def _counts(parts: Iterable[tuple[int, int]]) -> InvariantFactorGroup:
    orders: list[int] = []
    for q, mult in parts:
        if mult < 0:
            raise ValueError("negative multiplicity")
        orders += [q] * mult
    return InvariantFactorGroup.from_orders(orders)


def example1(p: int, k: int, n: int) -> InvariantFactorGroup:
    """``G = (C_{p^n})^k``."""
    _check_prime(p)
    if k < 1 or n < 1:
        raise ValueError("need k, n >= 1")
    parts = [(p ** i, (p ** k - 1) * p ** (k * (n - i - 1))) for i in range(1, n)]
    parts.append((p ** n, 1 + (k - 1) * p ** (k * n)))
    return _counts(parts)


def example2(p: int, k: int, n: int) -> InvariantFactorGroup:
    """``G = (C_p)^k x C_{p^n}``, with ``r = p^(k+1) - p + 1``."""
    _check_prime(p)
    if k < 1 or n < 1:
        raise ValueError("need k, n >= 1")
    r = p ** (k + 1) - p + 1
    parts = [(p, p ** n * (1 + (k - 1) * p ** k))]
    parts += [(p ** i, r * _totient_pp(p, n - i)) for i in range(1, n)]
    parts.append((p ** n, r))
    return _counts(parts)


def example1_shape(p, k, n) -> PGroupShape:
    return PGroupShape(p, (n,) * k)


def example2_shape(p, k, n) -> PGroupShape:
    return PGroupShape(p, (n,) + (1,) * k)


def symbol_order(p: int, s: int, n: int) -> int:
    """Order of ``<x, x^(n-1)>`` in reduced ``K_2((Z/p^s)[x]/(x^n))``: ``p^min(s-1, v_p(n))``.

    Only the prime ``p`` contributes; the group is a p-group, and the image of
    the symbol is ``Z/p^(s-1) (x) Z/n``.
    """
    _params(p, s, n, 2)
    return p ** min(s - 1, vp(n, p))


@dataclass(frozen=True)
class IdentityReport:
    p: int
    s: int
    n: int
    left: InvariantFactorGroup
    right: InvariantFactorGroup

    @property
    def ok(self) -> bool:
        return self.left == self.right


def tensor_cyclic_identity_check(p: int, s: int, n: int) -> IdentityReport:
    """Compare ``Z/p^(s-1) (x) sum_g C_{p^n}/<g>`` (by enumeration) with the totient count."""
    _params(p, s, n, 1)
    hc1 = hc1_closed(PGroupShape(p, (n,)))
    left = TensorCyclicExpr(p, s - 1, hc1.factors).evaluate()
    return IdentityReport(p, s, n, left, k2_cyclic_corollary(p, s, n))
