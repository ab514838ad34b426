"""The maps between ``K_2``, ``HC_1`` and ``H~_2``: f, omega_2, epsilon_2, Gamma_2 and its extension.

Symbols ``{g, u}`` are never represented as ``K_2`` classes; they are carried
as a group element and a unit in decomposed form ``u = zeta * s * h * v``
and pushed into the presented groups of :mod:`k2padic.homology`.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field

from .grpring import (
    GroupRingElem,
    e_G,
    gamma_G,
    in_pm_G,
    parse_group_element,
    torsion_kill_exponent,
)
from .homology import h2_tilde, hc1_presentation, kaehler_presentation
from .padic import DEFAULT_PRECISION, NonUnitError, PadicScaled, PrecisionError, teichmueller, vp
from .pgroups import GroupElement, PGroupShape


def linearize_f(h: GroupElement, N: int = DEFAULT_PRECISION) -> GroupRingElem:
    """``f(prod g_i^a_i) = sum a_i g_i`` with the reduced exponents; ``f(1) = 0``."""
    terms = {}
    for i, a in enumerate(h.exps):
        if a:
            terms[h.shape.generator(i)] = a
    return GroupRingElem.from_dict(h.shape, terms, N)


# --------------------------------------------------------------------------
# omega_2 and epsilon_2 on coordinate vectors


@dataclass(frozen=True)
class H2Class:
    shape: PGroupShape
    coords: tuple[int, ...]

    @classmethod
    def of(cls, shape, v) -> "H2Class":
        return cls(shape, h2_tilde(shape).reduce(v))

    def is_zero(self) -> bool:
        return h2_tilde(self.shape).is_zero(self.coords)


def omega2_vector(shape: PGroupShape, v) -> list[int]:
    """``omega_2`` on ``HC_1`` coordinates: ``g_i (x) h  ->  g_i ^~ g_i^{-1} h``."""
    k = shape.rank
    vecs = shape.exponent_vectors
    out = [0] * (k * k)
    for idx, c in enumerate(v):
        if c:
            h, i = divmod(idx, k)
            w = list(vecs[h])
            w[i] -= 1
            for j, b in enumerate(w):
                b %= shape.moduli[j]
                if b:
                    out[i * k + j] += c * b
    return out


def omega2(shape: PGroupShape, triples) -> list[int]:
    """``omega_2(sum g (x) lam h) = sum lam (g ^~ g^{-1} h)`` as ``H~_2`` coordinates."""
    ctx = h2_tilde(shape)
    out = ctx.zero()
    for g, lam, h in triples:
        w = ctx.wedge(g, g.inverse() * h)
        out = [a + lam * b for a, b in zip(out, w)]
    return out


def epsilon2_pair(g: GroupElement, h: GroupElement) -> list[int]:
    """``epsilon_2(g ^~ h)`` in ``HC_1`` coordinates, by bilinear expansion over generator pairs.

    The closed form ``g (x) g f(h)`` agrees with this when ``g`` is a basis
    generator; for other ``g`` it is not additive in ``g`` and is not used.
    """
    return epsilon2(g.shape, h2_tilde(g.shape).wedge(g, h))


def epsilon2(shape: PGroupShape, v) -> list[int]:
    """``epsilon_2`` extended linearly from ``g_i ^~ g_j  ->  g_i (x) g_i g_j``."""
    k = shape.rank
    ctx = hc1_presentation(shape)
    out = ctx.zero()
    for idx, c in enumerate(v):
        if c:
            i, j = divmod(idx, k)
            gg = shape.generator(i) * shape.generator(j)
            out[ctx.index(gg.index, i)] += c
    return out


# --------------------------------------------------------------------------
# units in decomposed form


def decompose_scalar(lam, p: int | None = None, N: int = DEFAULT_PRECISION):
    """``lam = zeta * s`` with ``zeta`` a root of unity and ``s`` in ``1 + pZ_p`` (``1 + 4Z_2``)."""
    if not isinstance(lam, PadicScaled):
        if p is None:
            raise ValueError("prime required")
        lam = PadicScaled.from_int(lam, p, N)
    zeta = teichmueller(lam)
    return zeta, lam * zeta.invert()


@dataclass(frozen=True)
class DecomposedUnit:
    """``u = zeta * s * h * v`` with ``zeta`` torsion, ``s`` principal, ``h`` in ``G``, ``v`` in ``1 + I``."""

    zeta: int
    s: int
    h: GroupElement
    v: GroupRingElem = field(compare=False)

    def __post_init__(self):
        p = self.h.shape.p
        if self.zeta % p == 0:
            raise NonUnitError("zeta must be a unit")
        if p == 2 and self.zeta not in (1, -1):
            raise ValueError("for p = 2, zeta is a sign")
        if (self.s - 1) % (4 if p == 2 else p):
            raise ValueError(f"s = {self.s} is not a principal unit")
        if self.v.augmentation() != 1:
            raise ValueError("v must have augmentation 1")

    @property
    def shape(self) -> PGroupShape:
        return self.h.shape

    @classmethod
    def from_parts(cls, shape, zeta=1, s=1, h=None, v=None, N=DEFAULT_PRECISION):
        h = shape.identity() if h is None else h
        v = GroupRingElem.one(shape, N) if v is None else v
        return cls(int(zeta), int(s), h, v)

    @classmethod
    def parse(cls, shape: PGroupShape, text: str, N: int = DEFAULT_PRECISION) -> "DecomposedUnit":
        """Parse ``"zeta:-1,s:1,h:g1,v:1+2*(g0-1)"``; omitted parts default to 1."""
        parts = {"zeta": "1", "s": "1", "h": "1", "v": "1"}
        for key, val in _split_fields(text):
            if key not in parts:
                raise ValueError(f"unknown unit component {key!r}")
            parts[key] = val
        return cls(int(parts["zeta"]), int(parts["s"]),
                   parse_group_element(shape, parts["h"]),
                   GroupRingElem.parse(shape, parts["v"], N))

    def zeta_sign(self) -> int:
        return -1 if self.zeta == -1 else 1

    def assemble(self, N: int | None = None) -> GroupRingElem:
        N = self.v.N if N is None else N
        lam = self.zeta * self.s
        hv = GroupRingElem.from_group_element(self.h, N, lam)
        return hv * self.v.with_precision(N)

    def __mul__(self, other: "DecomposedUnit") -> "DecomposedUnit":
        """Componentwise product."""
        return DecomposedUnit(self.zeta * other.zeta, self.s * other.s,
                              self.h * other.h, self.v * other.v)

    def __str__(self):
        return f"zeta:{self.zeta},s:{self.s},h:{self.h.label()},v:{self.v}"


def _split_fields(text):
    # commas inside v's expression are not allowed by the grammar, so a plain
    # split on "," before the next "key:" is safe
    for m in re.finditer(r"(\w+)\s*:\s*([^,]+)", text):
        yield m.group(1), m.group(2).strip()


@dataclass(frozen=True)
class K2Symbol:
    g: GroupElement
    u: DecomposedUnit

    @classmethod
    def parse(cls, shape: PGroupShape, text: str, N: int = DEFAULT_PRECISION) -> "K2Symbol":
        """Parse ``"g=g0; u=zeta:-1,s:1,h:g1,v:1+2*(g0-1)"``."""
        fields = {}
        for chunk in text.split(";"):
            if not chunk.strip():
                continue
            key, _, val = chunk.partition("=")
            fields[key.strip()] = val.strip()
        if "g" not in fields:
            raise ValueError("symbol needs g=...")
        g = parse_group_element(shape, fields["g"])
        u = DecomposedUnit.parse(shape, fields.get("u", ""), N)
        return cls(g, u)


# --------------------------------------------------------------------------
# Gamma_2 and its extension


def min_precision(shape: PGroupShape) -> int:
    """Least precision at which ``Gamma_G`` coefficients are reliable modulo the exponent of ``HC_1``."""
    return shape.max_exponent + vp(torsion_kill_exponent(shape), shape.p) + 2


def _gamma_coeffs(u: GroupRingElem, N: int) -> list[int]:
    shape = u.shape
    if N < min_precision(shape):
        raise PrecisionError(f"precision {N} below the required {min_precision(shape)}")
    mod = shape.p ** shape.max_exponent
    gam = gamma_G(u, N)
    return [c % mod for c in gam.coeffs]


def gamma2(sym: K2Symbol, N: int = DEFAULT_PRECISION) -> list[int]:
    """``Gamma_2({g, u}) = g (x) Gamma_G(u)`` in ``HC_1`` coordinates."""
    ctx = hc1_presentation(sym.g.shape)
    return ctx.tensor(sym.g, _gamma_coeffs(sym.u.assemble(N + 1), N))


def h_prime(sym: K2Symbol) -> GroupElement:
    u = sym.u
    if u.shape.p == 2 and u.zeta_sign() == -1:
        return sym.g * u.h
    return u.h


def gamma2_ext(sym: K2Symbol, N: int = DEFAULT_PRECISION) -> list[int]:
    """``Gamma_2({g, u}) + epsilon_2(g ^~ h'_u)``."""
    base = gamma2(sym, N)
    return [a + b for a, b in zip(base, epsilon2_pair(sym.g, h_prime(sym)))]


def hc1_to_kaehler(shape: PGroupShape, v) -> list[int]:
    """``g_i (x) h  ->  h g_i^{-1} dg_i`` on coordinates; sends ``g (x) g`` to ``d(g)``."""
    k = shape.rank
    ctx = kaehler_presentation(shape)
    vecs = shape.exponent_vectors
    out = ctx.zero()
    for idx, c in enumerate(v):
        if c:
            h, i = divmod(idx, k)
            w = list(vecs[h])
            w[i] -= 1
            out[ctx.index(shape.index(w), i)] += c
    return out


def l2_tilde(sym: K2Symbol, N: int = DEFAULT_PRECISION) -> tuple[GroupElement, list[int]]:
    """``[g, Gamma_G(u) + g f(h'_u)]`` pushed into ``Omega/dI``."""
    return sym.g, hc1_to_kaehler(sym.g.shape, gamma2_ext(sym, N))


def wh2_order(shape: PGroupShape) -> int:
    """``|HC_1| / |H~_2|``; non-divisibility would contradict exactness and raises."""
    a = hc1_presentation(shape).order
    b = h2_tilde(shape).order
    if a % b:
        raise ArithmeticError(f"|H~_2| = {b} does not divide |HC_1| = {a} for {shape}")
    return a // b


# --------------------------------------------------------------------------
# splitting check


@dataclass
class SplittingRecord:
    unit: str
    ok: bool
    sign: int | None
    element: str | None
    precision: int
    error: str | None = None


def check_split(u: GroupRingElem, N: int | None = None) -> SplittingRecord:
    """Whether ``E_G(Gamma_G(u)) u^{-1}`` lies in ``+-G``; ``Gamma_G`` is taken at precision ``N < u.N``."""
    N = u.N - 1 if N is None else N
    try:
        w = e_G(gamma_G(u, N)) * u.with_precision(N).inverse()
    except Exception as exc:  # reported, not raised
        return SplittingRecord(str(u), False, None, None, N, f"{type(exc).__name__}: {exc}")
    hit = in_pm_G(w)
    if w.N < N - u.shape.max_exponent + 1:
        return SplittingRecord(str(u), False, None, None, w.N, f"precision fell to {w.N}")
    if hit is None:
        return SplittingRecord(str(u), False, None, None, w.N, f"residual {w}")
    return SplittingRecord(str(u), True, hit[0], hit[1].label(), w.N)


def random_element(shape: PGroupShape, rng: random.Random, N: int, bound: int | None = None) -> GroupRingElem:
    bound = shape.p ** N if bound is None else bound
    return GroupRingElem(shape, [rng.randrange(bound) for _ in range(shape.order)], N)


def random_unit(shape: PGroupShape, rng: random.Random, N: int) -> GroupRingElem:
    """Uniform-ish unit of ``Z/p^N[G]``: random coefficients with the augmentation forced prime to ``p``."""
    x = random_element(shape, rng, N)
    eps = sum(x.coeffs)
    if eps % shape.p == 0:
        c = list(x.coeffs)
        c[0] += rng.randrange(1, shape.p)
        x = GroupRingElem(shape, c, N)
    return x


def splitting_sample(shape: PGroupShape, rng: random.Random, N: int) -> GroupRingElem:
    """``+-h * w^k`` with ``w`` a random unit and ``k`` the torsion-killing exponent."""
    k = torsion_kill_exponent(shape)
    w = random_unit(shape, rng, N)
    h = shape.elements()[rng.randrange(shape.order)]
    sign = rng.choice((1, -1))
    return GroupRingElem.from_group_element(h, N, sign) * w ** k


def verify_splitting(shape: PGroupShape, samples: int = 50, seed: int = 0,
                     N: int = 10, units=None) -> list[SplittingRecord]:
    """Run :func:`check_split` on seeded samples (or on the given ``units``)."""
    if units is None:
        rng = random.Random(seed)
        units = [splitting_sample(shape, rng, N + 1) for _ in range(samples)]
    return [check_split(u, N) for u in units]
