"""Truncated p-adic numbers with an explicit denominator.

A :class:`PadicScaled` is the value ``m / p^a`` known modulo ``p^N``
(absolute precision).  The mantissa lives in ``Z/p^(N+a)``.  Dividing by
``p`` raises the scale and lowers the certified precision by one, so the
mantissa modulus never changes and nothing is rounded away silently.
"""

from __future__ import annotations

from dataclasses import dataclass

DEFAULT_PRECISION = 8


class PadicError(ArithmeticError):
    pass


class PrecisionError(PadicError):
    pass


class NonUnitError(PadicError, ValueError):
    pass


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_capped(n: int, p: int, cap: int) -> int:
    """Valuation of ``n`` viewed modulo ``p^cap``; zero reports ``cap``."""
    if cap <= 0:
        return cap
    n %= p ** cap
    if n == 0:
        return cap
    return vp(n, p)


def vp_factorial(n: int, p: int) -> int:
    """``v_p(n!) = (n - s_p(n)) / (p - 1)`` with ``s_p`` the base-p digit sum."""
    s, m = 0, n
    while m:
        s += m % p
        m //= p
    return (n - s) // (p - 1)


@dataclass(frozen=True, eq=False)
class PadicScaled:
    p: int
    N: int
    scale: int
    mantissa: int

    def __post_init__(self):
        if self.N < 0:
            raise PrecisionError(f"negative precision {self.N}")
        if self.scale < 0:
            raise ValueError("scale must be nonnegative")
        object.__setattr__(self, "mantissa", self.mantissa % self.p ** (self.N + self.scale))

    @classmethod
    def from_int(cls, n: int, p: int, N: int = DEFAULT_PRECISION) -> "PadicScaled":
        return cls(p, N, 0, n)

    @classmethod
    def from_fraction(cls, num: int, den: int, p: int, N: int = DEFAULT_PRECISION) -> "PadicScaled":
        a = vp(den, p)
        u = den // p ** a
        mod = p ** (N + a)
        return cls(p, N, a, num * pow(u, -1, mod))

    @property
    def modulus(self) -> int:
        return self.p ** (self.N + self.scale)

    def _same_prime(self, other: "PadicScaled"):
        if other.p != self.p:
            raise PadicError(f"prime mismatch: {self.p} vs {other.p}")

    def _coerce(self, other):
        if isinstance(other, PadicScaled):
            self._same_prime(other)
            return other
        if isinstance(other, int):
            return PadicScaled(self.p, self.N, 0, other)
        return NotImplemented

    def valuation(self) -> int:
        """Valuation of the known value; an element zero at precision reports ``N``."""
        return vp_capped(self.mantissa, self.p, self.N + self.scale) - self.scale

    def is_zero(self) -> bool:
        return self.mantissa == 0

    def is_unit(self) -> bool:
        return self.valuation() == 0 and self.N > 0

    def normalize(self) -> "PadicScaled":
        """Same value with the least scale the mantissa allows."""
        m, a = self.mantissa, self.scale
        while a and m % self.p == 0:
            m //= self.p
            a -= 1
        return PadicScaled(self.p, self.N, a, m)

    def rescale(self, a: int) -> "PadicScaled":
        if a < self.scale:
            n = self.normalize()
            if n.scale > a:
                raise PrecisionError(f"value has denominator p^{n.scale}, cannot use scale {a}")
            return n.rescale(a)
        return PadicScaled(self.p, self.N, a, self.mantissa * self.p ** (a - self.scale))

    def with_precision(self, N: int) -> "PadicScaled":
        """Truncate to a lower precision (or restate at a higher one, reading the mantissa as exact)."""
        return PadicScaled(self.p, N, self.scale, self.mantissa)

    def is_integral(self) -> bool:
        return self.normalize().scale == 0

    def to_int(self) -> int:
        """Representative in ``[0, p^N)``; the value must be integral."""
        n = self.normalize()
        if n.scale:
            raise PadicError("value is not integral")
        return n.mantissa

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a = max(self.scale, other.scale)
        N = min(self.N, other.N)
        m = (self.mantissa * self.p ** (a - self.scale)
             + other.mantissa * self.p ** (a - other.scale))
        return PadicScaled(self.p, N, a, m)

    __radd__ = __add__

    def __neg__(self):
        return PadicScaled(self.p, self.N, self.scale, -self.mantissa)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.mul_int(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        N = min(self.N + other.valuation(), other.N + self.valuation())
        return PadicScaled(self.p, N, self.scale + other.scale, self.mantissa * other.mantissa)

    __rmul__ = __mul__

    def mul_int(self, k: int) -> "PadicScaled":
        if k == 0:
            return PadicScaled(self.p, self.N, 0, 0)
        return PadicScaled(self.p, self.N + vp(k, self.p), self.scale, self.mantissa * k)

    def div_int(self, k: int) -> "PadicScaled":
        """Divide by a nonzero integer: unit part inverted, each factor ``p`` moves into the scale."""
        v = vp(k, self.p)
        u = k // self.p ** v
        if self.N - v < 0:
            raise PrecisionError(f"dividing by p^{v} exhausts precision {self.N}")
        mod = self.modulus
        return PadicScaled(self.p, self.N - v, self.scale + v, self.mantissa * pow(u, -1, mod))

    def invert(self) -> "PadicScaled":
        n = self.normalize()
        if n.scale or n.mantissa % self.p == 0:
            raise NonUnitError(f"{self} is not a p-adic unit")
        return PadicScaled(self.p, self.N, 0, pow(n.mantissa, -1, self.p ** self.N))

    def __truediv__(self, other):
        if isinstance(other, int):
            return self.div_int(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __pow__(self, k: int) -> "PadicScaled":
        if k < 0:
            return self.invert() ** -k
        out = PadicScaled(self.p, self.N, 0, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        """Equality of values at the smaller of the two precisions."""
        other = self._coerce(other) if isinstance(other, (int, PadicScaled)) else NotImplemented
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __str__(self):
        base = f"{self.mantissa}"
        if self.scale:
            base += f" * {self.p}^-{self.scale}"
        return f"{base} + O({self.p}^{self.N})"

    def __repr__(self):
        return f"PadicScaled(p={self.p}, N={self.N}, scale={self.scale}, mantissa={self.mantissa})"

    def to_json(self) -> dict:
        return {"p": self.p, "N": self.N, "scale": self.scale, "mantissa": str(self.mantissa)}

    @classmethod
    def from_json(cls, obj: dict) -> "PadicScaled":
        return cls(int(obj["p"]), int(obj["N"]), int(obj["scale"]), int(obj["mantissa"]))


def teichmueller(lam, p: int | None = None, N: int = DEFAULT_PRECISION) -> PadicScaled:
    """Root of unity congruent to a unit ``lam``.

    For odd ``p`` this is the ``(p-1)``-th root of unity ``= lam mod p``,
    obtained by iterating ``x -> x^p``.  For ``p = 2`` the torsion of
    ``Z_2^*`` is ``{+1, -1}`` and the sign is read off ``lam mod 4``.
    """
    if isinstance(lam, PadicScaled):
        p, N = lam.p, lam.N
        lam = lam.to_int()
    if p is None:
        raise ValueError("prime required")
    if lam % p == 0:
        raise NonUnitError(f"{lam} is not a unit mod {p}")
    mod = p ** N
    if p == 2:
        return PadicScaled(2, N, 0, 1 if lam % 4 == 1 or N < 2 else -1)
    x = lam % mod
    for _ in range(N + 2):
        y = pow(x, p, mod)
        if y == x:
            break
        x = y
    return PadicScaled(p, N, 0, x)
