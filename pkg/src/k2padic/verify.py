"""Batch verification suites with deterministic, machine-readable reports.

A suite is a list of named checks.  Each check gets its own RNG seeded from
the master seed and the check name, so a single check rerun in isolation
(``--check NAME``) reproduces exactly what it did inside the full suite.
"""

from __future__ import annotations

import hashlib
import json
import random
import shlex
import time
from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import structure as st
from .exactlin import InvariantFactorGroup
from .grpring import (
    GroupRingElem,
    exp_elem,
    gamma_G,
    log_unit,
)
from .homology import h2_full_presentation, h2_tilde, hc1_closed, hc1_presentation, kaehler_mod_dI
from .ktmaps import (
    DecomposedUnit,
    K2Symbol,
    check_split,
    epsilon2,
    gamma2_ext,
    l2_tilde,
    omega2_vector,
    random_element,
    splitting_sample,
    wh2_order,
)
from .pgroups import PGroupShape, all_shapes

SCHEMA = "k2padic/1"

SUITES = ("eq1", "kaehler", "gamma", "splitting", "section", "wh2", "thmB", "corollary", "examples")

GAMMA_GROUPS = ("2:[1]", "2:[2]", "3:[1]", "3:[2]", "2:[1,1]", "3:[1,1]")
SPLIT_GROUPS = ("2:[1]", "3:[1]", "2:[2]", "2:[1,1]", "3:[2]")
GAMMA2_GROUPS = ("2:[1]", "2:[2]", "2:[1,1]")

EXAMPLE1_TUPLES = tuple(
    [(2, k, n) for k in range(1, 9) for n in range(1, 9) if k * n <= 8]
    + [(3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 1)])
EXAMPLE2_TUPLES = ((2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1))


@dataclass
class Params:
    max_order: int | None = None
    samples: int | None = None
    seed: int = 0
    precision: int | None = None

    def to_json(self) -> dict:
        return {"max_order": self.max_order, "samples": self.samples,
                "seed": self.seed, "precision": self.precision}


@dataclass
class CheckRecord:
    name: str
    digest: str
    passed: bool
    witness: object = None
    reproducer: str | None = None

    def to_json(self) -> dict:
        out = {"name": self.name, "inputs_digest": self.digest, "passed": self.passed}
        if not self.passed:
            out["witness"] = self.witness
            out["reproducer"] = self.reproducer
        return out


@dataclass
class VerificationReport:
    suite: str
    params: Params
    checks: list[CheckRecord] = field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "suite": self.suite,
            "parameters": self.params.to_json(),
            "checks": [c.to_json() for c in self.checks],
            "summary": {"total": len(self.checks), "passed": self.passed, "failed": self.failed},
            "duration_s": round(self.duration, 3),
        }

    def text(self) -> str:
        lines = []
        by_suite: dict[str, list[CheckRecord]] = {}
        for c in self.checks:
            by_suite.setdefault(c.name.split("/")[0], []).append(c)
        for name, recs in by_suite.items():
            bad = [r for r in recs if not r.passed]
            lines.append(f"{'PASS' if not bad else 'FAIL'} {name}: {len(recs) - len(bad)}/{len(recs)} checks")
            for r in bad:
                lines.append(f"  FAIL {r.name}: {r.witness}")
                lines.append(f"    reproduce: {r.reproducer}")
        lines.append(f"{self.passed}/{len(self.checks)} checks passed in {self.duration:.1f}s")
        return "\n".join(lines)


@dataclass
class Check:
    name: str
    inputs: dict
    run: Callable[[random.Random], tuple[bool, object]]


def _digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, default=str).encode()).hexdigest()[:16]


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(int(_digest([seed, name]), 16))


def _same(a: InvariantFactorGroup, b: InvariantFactorGroup):
    return a == b, None if a == b else {"got": a.to_json(), "expected": b.to_json()}


def _shapes(primes_bounds):
    for p, bound in primes_bounds:
        yield from all_shapes(p, bound)


# --------------------------------------------------------------------------
# suites


def _eq1(P: Params) -> Iterator[Check]:
    bounds = [(2, 81), (3, 81), (5, 125)]
    if P.max_order is not None:
        bounds = [(p, min(b, P.max_order)) for p, b in bounds]
    for G in _shapes(bounds):
        yield Check(f"eq1/{G}", {"group": str(G)},
                    lambda r, G=G: _same(hc1_presentation(G).structure, hc1_closed(G)))


def _kaehler(P: Params) -> Iterator[Check]:
    bound = 64 if P.max_order is None else min(64, P.max_order)
    for G in _shapes([(p, bound) for p in (2, 3, 5, 7)]):
        yield Check(f"kaehler/{G}", {"group": str(G)},
                    lambda r, G=G: _same(kaehler_mod_dI(G), hc1_closed(G)))


def _convergent_unit(G, rng, N):
    """Random ``u`` with ``eps(u) = 1 mod p``."""
    x = random_element(G, rng, N)
    c = list(x.coeffs)
    c[0] += 1 - sum(c)
    return GroupRingElem(G, c, N)


def _gamma_hom(G, N, r):
    u, v = _convergent_unit(G, r, N + 1), _convergent_unit(G, r, N + 1)
    gu, gv, guv = gamma_G(u), gamma_G(v), gamma_G(u * v)
    integral = all(x.scale == 0 for x in (gu, gv, guv))
    ok = integral and guv.N == N and guv == gu + gv
    return ok, None if ok else {"u": str(u), "v": str(v), "gamma_uv": str(guv),
                                "sum": str(gu + gv)}


def _gamma_kernel(G, N, r):
    bad = []
    for g in G.elements():
        for sign in (1, -1):
            w = gamma_G(GroupRingElem.from_group_element(g, N + 1, sign))
            if not w.is_zero() or w.scale:
                bad.append(f"{'-' if sign < 0 else '+'}{g.label()}: {w}")
    return not bad, bad or None


def _explog_sample(G, rng, N):
    p = G.p
    if p == 2:
        w = GroupRingElem.one(G, N) + random_element(G, rng, N).mul_int(2)
        return w * w
    return GroupRingElem.one(G, N) + random_element(G, rng, N).mul_int(p)


def _explog(G, N, r):
    u = _explog_sample(G, r, N)
    back = exp_elem(log_unit(u))
    ok = back.N == u.N and back == u
    return ok, None if ok else {"u": str(u), "exp_log_u": str(back)}


def _gamma(P: Params) -> Iterator[Check]:
    N = P.precision or 8
    n = 100 if P.samples is None else P.samples
    for spec in GAMMA_GROUPS:
        G = PGroupShape.parse(spec)
        yield Check(f"gamma/{G}/kernel", {"group": spec, "N": N},
                    lambda r, G=G: _gamma_kernel(G, N, r))
        for i in range(n):
            yield Check(f"gamma/{G}/hom/{i:03d}", {"group": spec, "N": N, "i": i},
                        lambda r, G=G: _gamma_hom(G, N, r))
            yield Check(f"gamma/{G}/explog/{i:03d}", {"group": spec, "N": N, "i": i},
                        lambda r, G=G: _explog(G, N, r))


def _split_one(G, N, r):
    u = splitting_sample(G, r, N + 1)
    rec = check_split(u, N)
    return rec.ok, None if rec.ok else {"unit": rec.unit, "error": rec.error}


def _splitting(P: Params) -> Iterator[Check]:
    N = P.precision or 10
    n = 50 if P.samples is None else P.samples
    for spec in SPLIT_GROUPS:
        G = PGroupShape.parse(spec)
        yield Check(f"splitting/{G}/trivial", {"group": spec, "N": N},
                    lambda r, G=G: (check_split(GroupRingElem.one(G, N + 1), N).ok, None))
        for i in range(n):
            yield Check(f"splitting/{G}/{i:03d}", {"group": spec, "N": N, "i": i},
                        lambda r, G=G: _split_one(G, N, r))


def _section(G, n_random, r):
    H = hc1_presentation(G)
    W = h2_tilde(G)
    k = G.rank
    bad = []
    for idx in range(k * k):
        e = [0] * (k * k)
        e[idx] = 1
        if not W.equal(omega2_vector(G, epsilon2(G, e)), e):
            bad.append(f"omega2(epsilon2(e{idx})) != e{idx}")
    for _ in range(n_random):
        v = [r.randrange(G.p ** G.max_exponent) for _ in range(k * k)]
        if not W.equal(omega2_vector(G, epsilon2(G, v)), v):
            bad.append(f"omega2(epsilon2({v})) != {v}")
            break
    rel = H.presentation.relations
    for j in range(rel.cols):
        if not W.is_zero(omega2_vector(G, rel.column(j))):
            bad.append(f"omega2 does not kill HC1 relation {j}")
            break
    wrel = W.presentation.relations
    for j in range(wrel.cols):
        if not H.is_zero(epsilon2(G, wrel.column(j))):
            bad.append(f"epsilon2 does not kill H2 relation {j}")
            break
    gens = []
    for idx in range(k * k):
        e = [0] * (k * k)
        e[idx] = 1
        gens.append(epsilon2(G, e))
    so = H.subgroup_order(gens)
    if so != W.order:
        bad.append(f"|epsilon2(H2)| = {so} != |H2| = {W.order}")
    return not bad, bad or None


def _section_suite(P: Params) -> Iterator[Check]:
    bound = 32 if P.max_order is None else min(32, P.max_order)
    n = 100 if P.samples is None else P.samples
    for G in _shapes([(p, bound) for p in (2, 3, 5)]):
        if G.rank == 0:
            continue
        yield Check(f"section/{G}", {"group": str(G), "samples": n},
                    lambda r, G=G: _section(G, n, r))


def _wh2_one(G):
    try:
        w = wh2_order(G)
    except ArithmeticError as exc:
        return False, str(exc)
    return True, None if w else "zero"


def _h2_full(G):
    a, b = h2_tilde(G).structure, h2_full_presentation(G).structure
    return _same(a, b)


def _c2c2_triple():
    G = PGroupShape(2, (1, 1))
    got = (hc1_presentation(G).order, h2_tilde(G).order, wh2_order(G))
    return got == (32, 8, 4), None if got == (32, 8, 4) else {"got": got}


def _gamma2_consistency(G, N):
    H = hc1_presentation(G)
    bad = []
    for g in G.elements():
        a = gamma2_ext(K2Symbol(g, DecomposedUnit.from_parts(G, zeta=-1, N=N)), N)
        b = gamma2_ext(K2Symbol(g, DecomposedUnit.from_parts(G, h=g, N=N)), N)
        if not H.equal(a, b):
            bad.append(g.label())
    return not bad, bad or None


def _l2_orders(G, N, r):
    H = hc1_presentation(G)
    bad = []
    from .homology import kaehler_presentation
    K = kaehler_presentation(G)
    for g in G.elements():
        h = G.elements()[r.randrange(G.order)]
        x = random_element(G, r, N)
        c = list(x.coeffs)
        c[0] += 1 - sum(c)
        v = GroupRingElem(G, c, N)
        sym = K2Symbol(g, DecomposedUnit.from_parts(G, zeta=r.choice((1, -1)) if G.p == 2 else 1,
                                                    h=h, v=v, N=N))
        a = H.element_order(gamma2_ext(sym, N))
        b = K.element_order(l2_tilde(sym, N)[1])
        if a != b:
            bad.append(f"{g.label()}: {a} vs {b}")
    return not bad, bad or None


def _wh2(P: Params) -> Iterator[Check]:
    bound = 81 if P.max_order is None else min(81, P.max_order)
    N = P.precision or 8
    for G in _shapes([(p, bound) for p in (2, 3, 5)]):
        yield Check(f"wh2/order/{G}", {"group": str(G)}, lambda r, G=G: _wh2_one(G))
        if G.order <= 16:
            yield Check(f"wh2/h2full/{G}", {"group": str(G)}, lambda r, G=G: _h2_full(G))
    yield Check("wh2/c2xc2", {}, lambda r: _c2c2_triple())
    for spec in GAMMA2_GROUPS:
        G = PGroupShape.parse(spec)
        yield Check(f"wh2/gamma2ext/{G}", {"group": spec, "N": N},
                    lambda r, G=G: _gamma2_consistency(G, N))
        yield Check(f"wh2/l2tilde/{G}", {"group": spec, "N": N},
                    lambda r, G=G: _l2_orders(G, N, r))


def _thmB(P: Params) -> Iterator[Check]:
    for p in (2, 3, 5):
        for s in range(2, 6):
            for n in range(1, 5):
                def bound(p=p, s=s, n=n):
                    grp = st.k2_cyclic_group_ring(p, s, n)
                    bad = [d for d in grp.factors if p ** (s - 1) % d]
                    return not bad, bad or None
                yield Check(f"thmB/exponent/{p},{s},{n}", {"p": p, "s": s, "n": n},
                            lambda r, f=bound: f())
    for p in (2, 3, 5):
        for s in range(2, 6):
            for n in range(2, 10):
                def so(p=p, s=s, n=n):
                    o = st.symbol_order(p, s, n)
                    grp = st.TensorCyclicExpr(p, s - 1, (n,)).evaluate()
                    ok = o == (grp.order if grp.factors else 1)
                    return ok, None if ok else {"symbol_order": o, "tensor": grp.to_json()}
                yield Check(f"thmB/symbol/{p},{s},{n}", {"p": p, "s": s, "n": n},
                            lambda r, f=so: f())


def _corollary(P: Params) -> Iterator[Check]:
    for p in (2, 3, 5):
        for s in range(2, 6):
            for n in range(1, 5):
                yield Check(f"corollary/formula/{p},{s},{n}", {"p": p, "s": s, "n": n},
                            lambda r, p=p, s=s, n=n: _same(st.k2_cyclic_corollary(p, s, n),
                                                           st.k2_cyclic_group_ring(p, s, n)))
    for p in (2, 3):
        for s in range(2, 6):
            for n in range(1, 5):
                def ident(p=p, s=s, n=n):
                    rep = st.tensor_cyclic_identity_check(p, s, n)
                    return _same(rep.left, rep.right)
                yield Check(f"corollary/counting/{p},{s},{n}", {"p": p, "s": s, "n": n},
                            lambda r, f=ident: f())


def _examples(P: Params) -> Iterator[Check]:
    for p, k, n in EXAMPLE1_TUPLES:
        G = st.example1_shape(p, k, n)
        if P.max_order is not None and G.order > max(P.max_order, 256):
            continue
        yield Check(f"examples/ex1/{p},{k},{n}", {"p": p, "k": k, "n": n},
                    lambda r, p=p, k=k, n=n, G=G: _same(st.example1(p, k, n), st.k2c_closed(G)))
    for p, k, n in EXAMPLE2_TUPLES:
        G = st.example2_shape(p, k, n)
        yield Check(f"examples/ex2/{p},{k},{n}", {"p": p, "k": k, "n": n},
                    lambda r, p=p, k=k, n=n, G=G: _same(st.example2(p, k, n), st.k2c_closed(G)))


_BUILDERS = {
    "eq1": _eq1,
    "kaehler": _kaehler,
    "gamma": _gamma,
    "splitting": _splitting,
    "section": _section_suite,
    "wh2": _wh2,
    "thmB": _thmB,
    "corollary": _corollary,
    "examples": _examples,
}


def list_checks(suite: str, params: Params) -> list[Check]:
    names = SUITES if suite == "all" else (suite,)
    out = []
    for s in names:
        if s not in _BUILDERS:
            raise ValueError(f"unknown suite {s!r}; choose from {', '.join(SUITES + ('all',))}")
        out.extend(_BUILDERS[s](params))
    return out


def reproducer(check: str, suite: str, params: Params) -> str:
    parts = ["k2padic", "verify", "--suite", suite, "--check", check, "--seed", str(params.seed)]
    if params.max_order is not None:
        parts += ["--max-order", str(params.max_order)]
    if params.samples is not None:
        parts += ["--samples", str(params.samples)]
    if params.precision is not None:
        parts += ["--precision", str(params.precision)]
    return shlex.join(parts)


def run_suite(suite: str, params: Params | None = None, only: str | None = None) -> VerificationReport:
    """Run every check of ``suite`` (or only the check named ``only``)."""
    params = params or Params()
    checks = list_checks(suite, params)
    if only is not None:
        checks = [c for c in checks if c.name == only]
        if not checks:
            raise ValueError(f"no check named {only!r} in suite {suite!r}")
    report = VerificationReport(suite, params)
    t0 = time.perf_counter()
    for c in checks:
        try:
            ok, witness = c.run(_rng(params.seed, c.name))
        except Exception as exc:  # a crash is a failed check, with the error as witness
            ok, witness = False, f"{type(exc).__name__}: {exc}"
        report.checks.append(CheckRecord(
            c.name, _digest(c.inputs), bool(ok), witness,
            None if ok else reproducer(c.name, suite, params)))
    report.duration = time.perf_counter() - t0
    report.checks.sort(key=lambda c: c.name)
    return report
