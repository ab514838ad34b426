"""``k2padic`` command line.

Exit status: 0 on success, 1 when a verification check fails or a
computation is rejected (precision, integrality), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import structure as st
from .grpring import GroupRingElem, gamma_G
from .homology import h2_tilde, hc1_presentation, kaehler_presentation
from .ktmaps import K2Symbol, gamma2, gamma2_ext, min_precision
from .padic import PadicError
from .pgroups import PGroupShape
from .verify import SUITES, Params, run_suite


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _shape(spec: str) -> PGroupShape:
    try:
        return PGroupShape.parse(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _params(text: str) -> dict[str, int]:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        try:
            out[key.strip()] = int(val)
        except ValueError as exc:
            raise UsageError(f"parameter {key} must be an integer") from exc
    return out


def _need(params, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise UsageError(f"missing parameter(s): {', '.join(missing)}")
    return [params[k] for k in keys]


def cmd_presentation(args, which) -> int:
    G = _shape(args.group)
    ctx = {"hc1": hc1_presentation, "h2": h2_tilde, "kaehler": kaehler_presentation}[which](G)
    out = ctx.structure.to_json()
    if args.json:
        r, c = ctx.relation_shape
        out = {"group": str(G), "structure": out, "generators": r, "relations": c}
    print(_dump(out))
    return 0


def cmd_structure(args) -> int:
    t = args.theorem
    P = _params(args.params or "")
    if t == "A":
        grp = st.k2_truncated_poly(*_need(P, "p", "s", "n"))
    elif t == "B":
        grp = st.k2_cyclic_group_ring(*_need(P, "p", "s", "n"))
    elif t == "corollary":
        grp = st.k2_cyclic_corollary(*_need(P, "p", "s", "n"))
    elif t == "C":
        if args.group:
            G = _shape(args.group)
        else:
            p, n = _need(P, "p", "n")
            G = st.example1_shape(p, P.get("k", 1), n)
        grp = st.k2c_closed(G)
    elif t == "ex1":
        grp = st.example1(*_need(P, "p", "k", "n"))
    else:
        grp = st.example2(*_need(P, "p", "k", "n"))
    print(_dump(grp.to_json()) if args.json else str(grp))
    return 0


def cmd_symbol_order(args) -> int:
    print(st.symbol_order(args.p, args.s, args.n))
    return 0


def cmd_gamma(args) -> int:
    G = _shape(args.group)
    N = args.precision
    try:
        u = GroupRingElem.parse(G, args.unit, N + 1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    res = gamma_G(u, N, method=args.method)
    if args.json:
        print(_dump({"group": str(G), "precision": N,
                     "coefficients": [{"element": g.label(), **res.coefficient(g).to_json()}
                                      for g in G.elements()]}))
    else:
        for g in G.elements():
            print(f"{g.label()}: {res.coefficient(g)}")
    return 0


def cmd_gamma2(args) -> int:
    G = _shape(args.group)
    N = args.precision if args.precision is not None else max(8, min_precision(G))
    try:
        sym = K2Symbol.parse(G, args.symbol, N + 1)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    H = hc1_presentation(G)
    plain = gamma2(sym, N)
    ext = gamma2_ext(sym, N)
    out = {
        "group": str(G),
        "precision": N,
        "gamma2": list(H.reduce(plain)),
        "gamma2_order": H.element_order(plain),
        "gamma2_ext": list(H.reduce(ext)),
        "gamma2_ext_order": H.element_order(ext),
    }
    print(_dump(out))
    return 0


def cmd_verify(args) -> int:
    P = Params(max_order=args.max_order, samples=args.samples, seed=args.seed,
               precision=args.precision)
    try:
        report = run_suite(args.suite, P, only=args.check)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    print(report.text())
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k2padic", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, help_ in (("hc1", "structure of HC_1(Z_p[G]) from its presentation"),
                        ("h2", "structure of the antisymmetric square H~_2(G)"),
                        ("kaehler", "structure of Omega/dI")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--group", required=True, help='group spec, e.g. "2:[1,1]" or C4xC2')
        sp.add_argument("--json", action="store_true", help="include relation-matrix dimensions")
        sp.set_defaults(func=lambda a, n=name: cmd_presentation(a, n))

    sp = sub.add_parser("structure", help="closed-form K_2 structure formulas")
    sp.add_argument("--theorem", required=True, choices=["A", "B", "C", "corollary", "ex1", "ex2"])
    sp.add_argument("--params", default="", help="comma list such as p=2,s=2,n=1")
    sp.add_argument("--group", help="group spec for theorem C")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_structure)

    sp = sub.add_parser("symbol-order", help="order of <x, x^(n-1)> over Z/p^s")
    sp.add_argument("p", type=int)
    sp.add_argument("s", type=int)
    sp.add_argument("n", type=int)
    sp.set_defaults(func=cmd_symbol_order)

    sp = sub.add_parser("gamma", help="Oliver's logarithm of a unit")
    sp.add_argument("--group", required=True)
    sp.add_argument("--unit", required=True, help='integer expression, e.g. "1 + 3*g0"')
    sp.add_argument("--precision", type=int, default=8)
    sp.add_argument("--method", choices=["power", "direct"], default="power")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_gamma)

    sp = sub.add_parser("gamma2", help="Gamma_2 and its extension on a symbol {g, u}")
    sp.add_argument("--group", required=True)
    sp.add_argument("--symbol", required=True,
                    help='e.g. "g=g0; u=zeta:-1,s:1,h:g1,v:1+2*(g0-1)"')
    sp.add_argument("--precision", type=int)
    sp.set_defaults(func=cmd_gamma2)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    sp.add_argument("--max-order", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--precision", type=int)
    sp.add_argument("--check", help="run only the check with this name")
    sp.add_argument("--json", metavar="PATH", help="write the JSON report here")
    sp.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (PadicError, ArithmeticError) as exc:
        print(f"k2padic {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ValueError) as exc:
        print(f"k2padic {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
