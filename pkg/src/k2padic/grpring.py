"""Group rings ``Z_p[G]`` over truncated p-adics, with Oliver's logarithm.

Elements of ``Z_p[G]`` (and of ``p^-a Z_p[G]``) are stored as one mantissa
per group element, sharing a precision ``N`` and a scale ``a`` exactly like
:class:`~k2padic.padic.PadicScaled`.  The element with index ``i`` is
``shape.exponent_vectors[i]``.

Series (``Log``, ``Exp``) are truncated by an explicit
:class:`ConvergenceCertificate`: with ``x = p^c z``, ``c = v_p(x)``, the
valuation of ``x^n`` is at least ``c*n`` and, if ``z`` lies in ``(p) + I``,
at least ``c*n + floor(n/d)`` where ``d`` is the nilpotency degree of the
augmentation ideal of ``F_p[G]``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .padic import (
    DEFAULT_PRECISION,
    NonUnitError,
    PadicError,
    PadicScaled,
    PrecisionError,
    vp,
    vp_capped,
    vp_factorial,
)
from .pgroups import GroupElement, PGroupShape


class DomainError(PadicError, ValueError):
    """Input outside the region where a series is known to converge."""


class ConvergenceError(PadicError):
    """No truncation index could be certified."""


class IntegralityError(PadicError):
    """A result that must lie in ``Z_p[G]`` came out with a denominator."""


class GroupRingElem:
    __slots__ = ("shape", "N", "scale", "coeffs")

    def __init__(self, shape: PGroupShape, coeffs, N: int = DEFAULT_PRECISION, scale: int = 0):
        if N < 0:
            raise PrecisionError(f"negative precision {N}")
        mod = shape.p ** (N + scale)
        coeffs = tuple(int(c) % mod for c in coeffs)
        if len(coeffs) != shape.order:
            raise ValueError(f"expected {shape.order} coefficients, got {len(coeffs)}")
        self.shape = shape
        self.N = N
        self.scale = scale
        self.coeffs = coeffs

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, shape, N=DEFAULT_PRECISION):
        return cls(shape, [0] * shape.order, N)

    @classmethod
    def scalar(cls, shape, lam: int, N=DEFAULT_PRECISION):
        c = [0] * shape.order
        c[0] = lam
        return cls(shape, c, N)

    @classmethod
    def one(cls, shape, N=DEFAULT_PRECISION):
        return cls.scalar(shape, 1, N)

    @classmethod
    def from_group_element(cls, g: GroupElement, N=DEFAULT_PRECISION, coeff: int = 1):
        c = [0] * g.shape.order
        c[g.index] = coeff
        return cls(g.shape, c, N)

    @classmethod
    def from_dict(cls, shape, terms, N=DEFAULT_PRECISION):
        """Build from ``{element: coefficient}``; keys may be group elements, indices or exponent tuples."""
        c = [0] * shape.order
        for key, a in terms.items():
            if isinstance(key, GroupElement):
                i = key.index
            elif isinstance(key, int):
                i = key
            else:
                i = shape.index(key)
            c[i] += a
        return cls(shape, c, N)

    @classmethod
    def parse(cls, shape, text: str, N=DEFAULT_PRECISION):
        return cls(shape, parse_integer_element(shape, text), N)

    # basic properties ---------------------------------------------------

    @property
    def p(self) -> int:
        return self.shape.p

    @property
    def modulus(self) -> int:
        return self.p ** (self.N + self.scale)

    def coefficient(self, g) -> PadicScaled:
        i = g.index if isinstance(g, GroupElement) else g
        return PadicScaled(self.p, self.N, self.scale, self.coeffs[i])

    def augmentation(self) -> PadicScaled:
        return PadicScaled(self.p, self.N, self.scale, sum(self.coeffs))

    def valuation(self) -> int:
        cap = self.N + self.scale
        return min(vp_capped(c, self.p, cap) for c in self.coeffs) - self.scale

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def support(self) -> list[int]:
        return [i for i, c in enumerate(self.coeffs) if c]

    def normalize(self) -> "GroupRingElem":
        p = self.p
        cs, a = self.coeffs, self.scale
        while a and all(c % p == 0 for c in cs):
            cs = tuple(c // p for c in cs)
            a -= 1
        if a == self.scale:
            return self
        return GroupRingElem(self.shape, cs, self.N, a)

    def is_integral(self) -> bool:
        return self.normalize().scale == 0

    def with_precision(self, N: int) -> "GroupRingElem":
        """Restate at precision ``N``; raising it reads the mantissas as exact."""
        return GroupRingElem(self.shape, self.coeffs, N, self.scale)

    def _aligned(self, other):
        if not isinstance(other, GroupRingElem):
            raise TypeError(f"cannot combine GroupRingElem with {type(other).__name__}")
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        a = max(self.scale, other.scale)
        p = self.p
        s1, s2 = p ** (a - self.scale), p ** (a - other.scale)
        return a, [c * s1 for c in self.coeffs], [c * s2 for c in other.coeffs]

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, int):
            other = GroupRingElem.scalar(self.shape, other, self.N)
        a, x, y = self._aligned(other)
        return GroupRingElem(self.shape, [u + v for u, v in zip(x, y)], min(self.N, other.N), a)

    __radd__ = __add__

    def __neg__(self):
        return GroupRingElem(self.shape, [-c for c in self.coeffs], self.N, self.scale)

    def __sub__(self, other):
        if isinstance(other, int):
            other = GroupRingElem.scalar(self.shape, other, self.N)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.mul_int(other)
        if isinstance(other, PadicScaled):
            other = GroupRingElem(self.shape, [other.mantissa] + [0] * (self.shape.order - 1),
                                  other.N, other.scale)
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        if other.shape != self.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")
        N = min(self.N + other.valuation(), other.N + self.valuation())
        a = self.scale + other.scale
        if N < 0:
            raise PrecisionError("product has no certified digits")
        mod = self.p ** (N + a)
        tab = self.shape.mul_table
        out = [0] * self.shape.order
        ys = [(j, c) for j, c in enumerate(other.coeffs) if c]
        for i, c in enumerate(self.coeffs):
            if c:
                row = tab[i]
                for j, d in ys:
                    out[row[j]] += c * d
        return GroupRingElem(self.shape, [c % mod for c in out], N, a)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.mul_int(other)
        return self.__mul__(other)

    def mul_int(self, k: int) -> "GroupRingElem":
        if k == 0:
            return GroupRingElem.zero(self.shape, self.N)
        return GroupRingElem(self.shape, [c * k for c in self.coeffs],
                             self.N + vp(k, self.p), self.scale)

    def div_int(self, k: int) -> "GroupRingElem":
        """Divide by a nonzero integer; factors of ``p`` go into the scale."""
        p = self.p
        v = vp(k, p)
        u = k // p ** v
        if self.N - v < 0:
            raise PrecisionError(f"dividing by p^{v} exhausts precision {self.N}")
        inv = pow(u, -1, self.modulus)
        return GroupRingElem(self.shape, [c * inv for c in self.coeffs], self.N - v, self.scale + v)

    def __pow__(self, k: int) -> "GroupRingElem":
        if k < 0:
            return self.inverse() ** -k
        out = GroupRingElem.one(self.shape, self.N)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def inverse(self) -> "GroupRingElem":
        """Inverse of a unit by Newton iteration ``x -> x (2 - u x)``."""
        u = self.normalize()
        if u.scale:
            raise NonUnitError("element is not integral")
        eps = u.augmentation()
        if eps.valuation() != 0:
            raise NonUnitError("augmentation is not a p-adic unit")
        N = u.N
        x = GroupRingElem.scalar(self.shape, eps.invert().mantissa, N)
        one = GroupRingElem.one(self.shape, N)
        for _ in range(2 * N * self.shape.nilpotency_degree + 8):
            err = one - u * x
            if err.is_zero():
                return x
            x = x * (one + err)
        raise ConvergenceError("Newton inversion did not converge")

    def frobenius_phi(self) -> "GroupRingElem":
        return frobenius_phi(self)

    def __eq__(self, other):
        """Equality of values at the smaller of the two precisions."""
        if isinstance(other, int):
            other = GroupRingElem.scalar(self.shape, other, self.N)
        if not isinstance(other, GroupRingElem):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def terms(self):
        """Nonzero ``(GroupElement, PadicScaled)`` pairs in enumeration order."""
        vecs = self.shape.exponent_vectors
        return [(GroupElement(self.shape, vecs[i]), self.coefficient(i)) for i in self.support()]

    def __str__(self):
        ts = self.terms()
        if not ts:
            return f"0 + O({self.p}^{self.N})"
        parts = []
        for g, c in ts:
            m = c.mantissa
            coef = str(m) if not c.scale else f"{m}*{self.p}^-{c.scale}"
            parts.append(coef if g.is_identity else f"{coef}*{g.label()}")
        return " + ".join(parts) + f" + O({self.p}^{self.N})"

    def __repr__(self):
        return (f"GroupRingElem(shape={self.shape}, N={self.N}, scale={self.scale}, "
                f"coeffs={list(self.coeffs)})")


# --------------------------------------------------------------------------
# integer-coefficient expression grammar: "1 + 3*g0 - 3*g0^2*g1", "1+2*(g0-1)"

_TOKEN = re.compile(r"\s*(?:(\d+)|(g\d+)|(\^)|([-+*()]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character at {pos} in {text!r}")
        num, gen, caret, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif gen is not None:
            out.append(("gen", int(gen[1:])))
        elif caret:
            out.append(("op", "^"))
        else:
            out.append(("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, shape: PGroupShape, text: str):
        self.shape = shape
        self.toks = _tokenize(text)
        self.i = 0
        if not self.toks:
            raise ValueError("empty expression")

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        val = self.expr()
        if self.i != len(self.toks):
            raise ValueError(f"trailing tokens in expression: {self.toks[self.i:]}")
        return val

    def _mul(self, x, y):
        tab = self.shape.mul_table
        out = [0] * self.shape.order
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[tab[i][j]] += a * b
        return out

    def expr(self):
        sign = 1
        if self.peek() in (("op", "-"), ("op", "+")):
            sign = -1 if self.take()[1] == "-" else 1
        val = [sign * c for c in self.term()]
        while self.peek() in (("op", "+"), ("op", "-")):
            s = 1 if self.take()[1] == "+" else -1
            val = [a + s * b for a, b in zip(val, self.term())]
        return val

    def term(self):
        val = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            val = self._mul(val, self.factor())
        return val

    def factor(self):
        kind, tok = self.take()
        n = self.shape.order
        if kind == "int":
            base = [0] * n
            base[0] = tok
            gen = None
        elif kind == "gen":
            if tok >= self.shape.rank:
                raise ValueError(f"g{tok} is not a generator of {self.shape}")
            gen = tok
            base = None
        elif (kind, tok) == ("op", "("):
            base = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            gen = None
        elif (kind, tok) == ("op", "-"):
            return [-c for c in self.factor()]
        else:
            raise ValueError(f"unexpected token {tok!r}")
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            k_kind, k = self.take()
            if k_kind != "int":
                raise ValueError("exponent must be an integer")
            if neg:
                if gen is None:
                    raise ValueError("negative exponents are allowed on generators only")
                k = -k
            if gen is not None:
                exps = [0] * self.shape.rank
                exps[gen] = k
                out = [0] * n
                out[self.shape.index(exps)] = 1
                return out
            out = [0] * n
            out[0] = 1
            for _ in range(k):
                out = self._mul(out, base)
            return out
        if gen is not None:
            exps = [0] * self.shape.rank
            exps[gen] = 1
            out = [0] * n
            out[self.shape.index(exps)] = 1
            return out
        return base


def parse_integer_element(shape: PGroupShape, text: str) -> list[int]:
    """Exact integer coefficients of an expression in the generators ``g0 .. g{k-1}``."""
    return _Parser(shape, text).parse()


def parse_group_element(shape: PGroupShape, text: str) -> GroupElement:
    coeffs = parse_integer_element(shape, text)
    nz = [(i, c) for i, c in enumerate(coeffs) if c]
    if len(nz) != 1 or nz[0][1] != 1:
        raise ValueError(f"{text!r} is not a group element")
    return GroupElement(shape, shape.exponent_vectors[nz[0][0]])


# --------------------------------------------------------------------------
# Frobenius lift and the operators built from it


def frobenius_phi(x: GroupRingElem) -> GroupRingElem:
    """``sum c_g g  ->  sum c_g g^p`` (coefficients fixed)."""
    out = [0] * x.shape.order
    for i, j in enumerate(x.shape.power_p_index):
        out[j] += x.coeffs[i]
    return GroupRingElem(x.shape, out, x.N, x.scale)


def delta(x: GroupRingElem) -> GroupRingElem:
    """``x - Phi(x)/p``."""
    return x - frobenius_phi(x).div_int(x.p)


def delta_inv(v: GroupRingElem) -> GroupRingElem:
    """Inverse of ``1 - Phi/p`` as a finite sum.

    With ``v = eps(v) + v0`` and ``v0`` in the augmentation ideal, ``Phi`` fixes
    the scalar part (giving the factor ``p/(p-1)``) and ``Phi^e`` kills ``v0``
    once ``p^e`` is the group exponent.
    """
    p = v.p
    eps = v.augmentation()
    scal = GroupRingElem(v.shape, [eps.mantissa] + [0] * (v.shape.order - 1), eps.N, eps.scale)
    out = scal.mul_int(p).div_int(p - 1)
    cur = v - scal
    for n in range(v.shape.max_exponent):
        out = out + (cur.div_int(p ** n) if n else cur)
        cur = frobenius_phi(cur)
    return out.normalize()


# --------------------------------------------------------------------------
# convergence certificates


@dataclass(frozen=True)
class ConvergenceCertificate:
    """Why truncating a series after ``n_max - 1`` terms is exact to ``O(p^tail_valuation)``.

    Every omitted term ``n >= n_max`` has valuation at least
    ``base_valuation*n + floor(n/nilpotency_degree)*nilpotent - loss(n)``,
    which is ``>= tail_valuation``; ``loss`` is ``floor(log_p n)`` for Log and
    ``v_p(n!)`` for Exp.
    """

    kind: str
    p: int
    nilpotency_degree: int
    base_valuation: int
    nilpotent: bool
    n_max: int
    tail_valuation: int

    def term_bound(self, n: int) -> int:
        return _term_bound(self.kind, self.p, self.nilpotency_degree,
                           self.base_valuation, int(self.nilpotent), n)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "nilpotency_degree": self.nilpotency_degree,
            "base_valuation": self.base_valuation,
            "nilpotent": self.nilpotent,
            "n_max": self.n_max,
            "tail_valuation": self.tail_valuation,
        }


def _ilog(n: int, p: int) -> int:
    k = 0
    while n >= p:
        n //= p
        k += 1
    return k


def _term_bound(kind, p, d, c, delta, n):
    base = c * n + delta * (n // d)
    if kind == "log":
        return base - _ilog(n, p)
    return base - vp_factorial(n, p)


def certify(kind: str, p: int, d: int, c: int, nilpotent: bool, target: int) -> ConvergenceCertificate:
    """Least ``n_max`` such that every term ``n >= n_max`` has valuation ``>= target``."""
    delta = int(nilpotent)
    if kind == "log":
        if c <= 0 and not delta:
            raise ConvergenceError("Log: argument not in (p) + I")
        # within [p^L, p^(L+1)) the bound is nondecreasing; band starts increase
        # once c >= 1 or p^L (p-1) >= d
        L = 0
        while True:
            start = p ** L
            if (c >= 1 or start * (p - 1) >= d) and _term_bound(kind, p, d, c, delta, start) >= target:
                break
            L += 1
        n_lim = p ** L
        first = 1
    elif kind == "exp":
        sigma = Fraction(c) + Fraction(delta, d) - Fraction(1, p - 1)
        if sigma <= 0:
            raise ConvergenceError(
                f"Exp: valuation {c} with nilpotent={bool(delta)} gives no decay (slope {sigma})")
        kappa = Fraction(delta * (1 - d), d) + Fraction(1, p - 1)
        n_lim = max(1, ceil((target - kappa) / sigma))
        first = 1
    else:
        raise ValueError(f"unknown series kind {kind!r}")
    last_bad = 0
    for n in range(first, n_lim):
        if _term_bound(kind, p, d, c, delta, n) < target:
            last_bad = n
    return ConvergenceCertificate(kind, p, d, c, bool(delta), last_bad + 1, target)


def _decay_data(x: GroupRingElem) -> tuple[int, bool]:
    """``(c, nilpotent)`` with ``x = p^c z`` and ``nilpotent`` iff ``z`` lies in ``(p) + I``."""
    c = x.valuation()
    if c >= x.N:
        return x.N, False
    return c, x.augmentation().valuation() > c


def _series_certificate(kind: str, x: GroupRingElem, target: int) -> ConvergenceCertificate:
    c, nil = _decay_data(x)
    return certify(kind, x.p, x.shape.nilpotency_degree, c, nil, target)


# --------------------------------------------------------------------------
# Log, Exp


def log_certificate(u: GroupRingElem, precision: int | None = None) -> ConvergenceCertificate:
    x = _log_argument(u)
    return _series_certificate("log", x, u.N if precision is None else precision)


def _log_argument(u: GroupRingElem) -> GroupRingElem:
    u = u.normalize()
    if u.scale:
        raise DomainError("Log needs an integral argument")
    x = u - 1
    if x.augmentation().valuation() < 1:
        raise DomainError("Log(u) needs u - 1 in (p) + I, i.e. eps(u) = 1 mod p")
    return x


def log_unit(u: GroupRingElem, precision: int | None = None, *, return_certificate=False):
    """``Log(u) = -sum_{n>=1} (1-u)^n / n`` for ``u`` in ``1 + (p) + I``."""
    x = _log_argument(u)
    T = u.N if precision is None else precision
    cert = _series_certificate("log", x, T)
    loss = _ilog(max(cert.n_max - 1, 1), x.p)
    acc = GroupRingElem.zero(u.shape, T)
    xn = None
    for n in range(1, cert.n_max):
        xn = x if xn is None else xn * x
        if xn.N > T + loss:
            xn = xn.with_precision(T + loss)
        term = xn.div_int(n)
        acc = acc + term if n % 2 else acc - term
    acc = acc.normalize()
    return (acc, cert) if return_certificate else acc


def exp_elem(y: GroupRingElem, precision: int | None = None, *, return_certificate=False):
    """``Exp(y) = sum y^n / n!`` under a certified decay of the terms."""
    y = y.normalize()
    T = y.N if precision is None else min(precision, y.N)
    cert = _series_certificate("exp", y, T)
    acc = GroupRingElem.one(y.shape, T)
    term = GroupRingElem.one(y.shape, T)
    for n in range(1, cert.n_max):
        term = (term * y).div_int(n)
        acc = acc + term
    acc = acc.normalize()
    return (acc, cert) if return_certificate else acc


# --------------------------------------------------------------------------
# Oliver's logarithm


def torsion_kill_exponent(shape: PGroupShape) -> int:
    """``k`` with ``u^k`` in ``1 + pR`` (``1 + 4R`` for ``p = 2``) for every unit ``u``."""
    p, e = shape.p, shape.max_exponent
    return 2 ** (e + 1) if p == 2 else (p - 1) * p ** e


def gamma_G(u: GroupRingElem, precision: int | None = None, method: str = "power",
            *, exact_input: bool = False) -> GroupRingElem:
    """Oliver's logarithm ``Gamma_G(u) = Log(u) - Log(Phi(u))/p``, returned in ``Z_p[G]``.

    Changing ``u`` by ``O(p^N)`` changes ``Gamma_G(u)`` by ``O(p^(N-1))``
    (the ``Phi/p`` term), so the result has precision ``u.N - 1`` unless a
    ``precision`` is given; asking for more raises :class:`PrecisionError`
    unless ``exact_input`` says the coefficients of ``u`` are exact integers.

    With ``method="power"`` (default) any unit is accepted: ``Gamma_G(u)`` is
    recovered as ``Gamma_G(u^k)/k`` with ``k`` from
    :func:`torsion_kill_exponent`.  ``method="direct"`` sums the series for
    ``u`` itself and needs ``eps(u) = 1 mod p``.  The result is checked to be
    integral; a denominator raises :class:`IntegralityError`.
    """
    if precision is None:
        N = u.N - 1
    else:
        N = precision
        if N > u.N - 1 and not exact_input:
            raise PrecisionError(
                f"Gamma_G of a unit known mod p^{u.N} is only defined mod p^{u.N - 1}")
    if N < 0:
        raise PrecisionError("no certified digits")
    u = u.normalize()
    if u.scale:
        raise NonUnitError("unit must be integral")
    p = u.p
    if u.augmentation().valuation() != 0:
        raise NonUnitError("augmentation is not a p-adic unit")
    if method == "power":
        k = torsion_kill_exponent(u.shape)
    elif method == "direct":
        k = 1
    else:
        raise ValueError(f"unknown method {method!r}")
    W = N + vp(k, p) + 2
    for _ in range(12):
        uk = u.with_precision(W) ** k
        L1 = log_unit(uk, W)
        L2 = log_unit(frobenius_phi(uk), W)
        g = (L1 - L2.div_int(p)).div_int(k).normalize()
        if g.N >= N:
            break
        W += N - g.N
    else:
        raise PrecisionError("could not reach the requested precision")
    if g.scale:
        raise IntegralityError(
            f"Gamma_G output has denominator p^{g.scale} at precision {g.N}")
    return g.with_precision(N)


def e_G(v: GroupRingElem, precision: int | None = None) -> GroupRingElem:
    """``Exp(Delta^{-1}(v))``; a single term ``lam*g`` with ``g != 1`` maps to 1."""
    v = v.normalize()
    supp = v.support()
    if len(supp) == 1 and supp[0] != 0:
        return GroupRingElem.one(v.shape, v.N)
    y = delta_inv(v)
    return exp_elem(y, precision)


def in_pm_G(w: GroupRingElem):
    """``(sign, g)`` with ``w = sign * g`` at the precision of ``w``, else ``None``."""
    w = w.normalize()
    if w.scale or w.N == 0:
        return None
    supp = w.support()
    if len(supp) != 1:
        return None
    i = supp[0]
    mod = w.p ** w.N
    c = w.coeffs[i] % mod
    g = GroupElement(w.shape, w.shape.exponent_vectors[i])
    if c == 1 % mod:
        return (1, g)
    if c == (-1) % mod:
        return (-1, g)
    return None
