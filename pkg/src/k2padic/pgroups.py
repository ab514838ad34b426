"""Finite abelian p-groups ``C_{p^e1} x ... x C_{p^ek}`` and their elements."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product as iproduct
from typing import Iterable, Sequence

from .exactlin import IntMatrix, InvariantFactorGroup, cokernel, direct_sum

__all__ = [
    "PGroupShape",
    "GroupElement",
    "GroupTooLarge",
    "max_order",
    "enumerate_group",
    "element_order",
    "quotient_by_cyclic",
    "direct_sum",
    "all_shapes",
]

DEFAULT_MAX_ORDER = 4096


class GroupTooLarge(ValueError):
    pass


def max_order() -> int:
    """Enumeration cap; ``K2PADIC_MAX_ORDER`` overrides the default of 4096."""
    env = os.environ.get("K2PADIC_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _prime_power(n: int) -> tuple[int, int]:
    for p in range(2, n + 1):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                raise ValueError("not a prime power")
            return p, e
    raise ValueError("not a prime power")


_SPEC_RE = re.compile(r"^\s*(\d+)\s*:\s*\[\s*([\d\s,]*)\]\s*$")
_ALIAS_RE = re.compile(r"^C(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class PGroupShape:
    """The group ``prod C_{p^e_i}`` with exponents stored nonincreasing."""

    p: int
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        exps = tuple(sorted((int(e) for e in self.exponents), reverse=True))
        if any(e < 1 for e in exps):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def parse(cls, spec: str) -> "PGroupShape":
        """Parse ``"3:[2,1]"`` or an alias such as ``"C9xC3"`` / ``"C2^3xC4"``."""
        m = _SPEC_RE.match(spec)
        if m:
            body = m.group(2).strip()
            exps = [int(t) for t in body.split(",")] if body else []
            return cls(int(m.group(1)), tuple(exps))
        p = None
        exps: list[int] = []
        for part in spec.replace("×", "x").replace(" ", "").split("x"):
            am = _ALIAS_RE.match(part)
            if not am:
                raise ValueError(f"cannot parse group spec {spec!r}")
            order, reps = int(am.group(1)), int(am.group(2) or 1)
            q, e = _prime_power(order)
            if p is not None and q != p:
                raise ValueError(f"mixed primes in {spec!r}")
            p = q
            exps.extend([e] * reps)
        if p is None:
            raise ValueError(f"cannot parse group spec {spec!r}")
        return cls(p, tuple(exps))

    def __str__(self):
        return f"{self.p}:[{','.join(map(str, self.exponents))}]"

    @property
    def alias(self) -> str:
        if not self.exponents:
            return "C1"
        return "x".join(f"C{self.p ** e}" for e in self.exponents)

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @cached_property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.p ** e for e in self.exponents)

    @property
    def order(self) -> int:
        return self.p ** sum(self.exponents)

    @property
    def max_exponent(self) -> int:
        """``e`` with ``p^e`` the exponent of the group (0 for the trivial group)."""
        return self.exponents[0] if self.exponents else 0

    @property
    def nilpotency_degree(self) -> int:
        """Least ``d`` with ``I^d = 0`` for the augmentation ideal ``I`` of ``F_p[G]``."""
        return 1 + sum(m - 1 for m in self.moduli)

    def canonical_group(self) -> InvariantFactorGroup:
        return InvariantFactorGroup.from_orders(self.moduli)

    def check_cap(self, cap: int | None = None) -> None:
        cap = max_order() if cap is None else cap
        if self.order > cap:
            raise GroupTooLarge(f"|G| = {self.order} exceeds the enumeration cap {cap}")

    # element indexing: lexicographic, first coordinate most significant
    @cached_property
    def _strides(self) -> tuple[int, ...]:
        out = []
        s = 1
        for m in reversed(self.moduli):
            out.append(s)
            s *= m
        return tuple(reversed(out))

    def index(self, exps: Sequence[int]) -> int:
        return sum((a % m) * s for a, m, s in zip(exps, self.moduli, self._strides))

    @cached_property
    def exponent_vectors(self) -> tuple[tuple[int, ...], ...]:
        self.check_cap()
        return tuple(iproduct(*(range(m) for m in self.moduli)))

    def elements(self) -> list["GroupElement"]:
        return [GroupElement(self, v) for v in self.exponent_vectors]

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generator(self, i: int) -> "GroupElement":
        v = [0] * self.rank
        v[i] = 1
        return GroupElement(self, tuple(v))

    def element(self, exps: Iterable[int]) -> "GroupElement":
        return GroupElement(self, tuple(exps))

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        vecs = self.exponent_vectors
        idx = self.index
        return tuple(tuple(idx([a + b for a, b in zip(u, v)]) for v in vecs) for u in vecs)

    @cached_property
    def power_p_index(self) -> tuple[int, ...]:
        """Index of ``g^p`` for each element index."""
        return tuple(self.index([self.p * a for a in v]) for v in self.exponent_vectors)

    @cached_property
    def inverse_index(self) -> tuple[int, ...]:
        return tuple(self.index([-a for a in v]) for v in self.exponent_vectors)


@dataclass(frozen=True)
class GroupElement:
    """Element ``prod g_i^{a_i}`` stored as its reduced exponent vector."""

    shape: PGroupShape
    exps: tuple[int, ...]

    def __post_init__(self):
        if len(self.exps) != self.shape.rank:
            raise ValueError(f"expected {self.shape.rank} exponents, got {len(self.exps)}")
        object.__setattr__(
            self, "exps", tuple(int(a) % m for a, m in zip(self.exps, self.shape.moduli)))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if other.shape != self.shape:
            raise ValueError("elements of different groups")
        return GroupElement(self.shape, tuple(a + b for a, b in zip(self.exps, other.exps)))

    def __pow__(self, k: int) -> "GroupElement":
        return GroupElement(self.shape, tuple(k * a for a in self.exps))

    def inverse(self) -> "GroupElement":
        return self ** -1

    @property
    def index(self) -> int:
        return self.shape.index(self.exps)

    @property
    def is_identity(self) -> bool:
        return not any(self.exps)

    def order(self) -> int:
        return element_order(self)

    def label(self) -> str:
        parts = []
        for i, a in enumerate(self.exps):
            if a == 1:
                parts.append(f"g{i}")
            elif a:
                parts.append(f"g{i}^{a}")
        return "*".join(parts) if parts else "1"

    def __str__(self):
        return self.label()


def enumerate_group(G: PGroupShape, cap: int | None = None) -> list[GroupElement]:
    """All elements in lexicographic order of exponent vectors, identity first."""
    G.check_cap(cap)
    return G.elements()


def element_order(g: GroupElement) -> int:
    p = g.shape.p
    o = 1
    for a, m in zip(g.exps, g.shape.moduli):
        if a:
            k = m
            while a % p == 0:
                a //= p
                k //= p
            o = max(o, k)
    return o


def quotient_by_cyclic(G: PGroupShape, g: GroupElement) -> InvariantFactorGroup:
    """Structure of ``G / <g>``."""
    return _quotient(G, g.exps)


@lru_cache(maxsize=65536)
def _quotient(G: PGroupShape, exps: tuple[int, ...]) -> InvariantFactorGroup:
    cols = [[m if i == j else 0 for i in range(G.rank)] for j, m in enumerate(G.moduli)]
    cols.append(list(exps))
    return cokernel(IntMatrix.from_columns(cols, G.rank))


def all_shapes(p: int, max_order: int, min_order: int = 1) -> list[PGroupShape]:
    """Every abelian ``p``-group with ``min_order <= |G| <= max_order``, by order then shape."""
    out = []
    n = 0
    while p ** n <= max_order:
        if p ** n >= min_order:
            for part in _partitions(n, n):
                out.append(PGroupShape(p, part))
        n += 1
    return out


def _partitions(n: int, largest: int):
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest

