"""Command-line front end.

    padic-towers res -f "2t^2-3t+2" -n 16
    padic-towers limit -f "t^2-t+1" -p 5 -N 6 --method both
    padic-towers knot twist -m -1 tower -p 7 -N 6
    padic-towers curve --l 5 --a 3 --b 3 --ext 3 tower -p 2 -N 10
    padic-towers table run --all
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import curves, knots
from . import emit
from .errors import TableMismatch, TowerError
from .exact_poly import cyclic_resultant, format_polynomial
from .limits import compute_limit, iwasawa_invariants
from .parse import parse_polynomial
from .selfcheck import run_selfcheck
from .tables import REGISTRY, run_table

EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _poly(text):
    return parse_polynomial(text)


def _out(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# --- handlers --------------------------------------------------------------

def cmd_res(args):
    f = _poly(args.f)
    value = cyclic_resultant(f, args.n)
    if args.format == "json":
        _out(emit.to_json({"polynomial": format_polynomial(f), "n": args.n, "resultant": emit.big(value)}))
    else:
        _out(str(value))


def _emit_limit(rep, fmt):
    if fmt == "json":
        _out(emit.to_json(emit.limit_report_dict(rep)))
    else:
        _out(emit.limit_report_text(rep))


def cmd_limit(args):
    rep = compute_limit(_poly(args.f), args.p, args.N, method=args.method)
    _emit_limit(rep, args.format)


def cmd_invariants(args):
    inv = iwasawa_invariants(_poly(args.f), args.p)
    if args.format == "json":
        _out(emit.to_json({"p": args.p, "lambda": inv.lam, "mu": inv.mu, "nu": inv.nu,
                           "stabilization_index": inv.stabilization_index,
                           "checked_levels": inv.checked_levels}))
    else:
        _out(f"lambda = {inv.lam}\nmu = {inv.mu}\nnu = {inv.nu}")
        if inv.stabilization_index is not None:
            _out(f"v_p(Res) = lambda n + mu p^n + nu verified for "
                 f"{inv.stabilization_index} <= n <= {inv.checked_levels}")


def _knot_polynomial(args):
    if args.kind == "torus":
        return knots.alexander_torus(knots.TorusKnotSpec(args.a, args.b))
    if args.kind == "twist":
        return knots.alexander_twist(knots.TwistKnotSpec(args.m_twist))
    return knots.KnotPolynomial.from_user(_poly(args.f), args.allow_unnormalized)


def cmd_knot(args):
    K = _knot_polynomial(args)
    action = args.action
    if action == "alexander":
        _out(format_polynomial(K.delta))
    elif action == "order":
        _out(str(knots.homology_order(K, args.n)))
    elif action == "livingston":
        cert = knots.livingston_predicate(K)
        if args.format == "json":
            _out(emit.to_json(cert))
        else:
            factors = " * ".join(f"Phi_{m}^{e}" if e > 1 else f"Phi_{m}" for m, e in cert.factors) or "1"
            _out(f"{'true' if cert.holds else 'false'}: D = {'-' if cert.unit < 0 else ''}"
                 f"{'t^%d * ' % cert.t_power if cert.t_power else ''}{factors}")
            if cert.blocking is not None:
                blocking = cert.blocking
                _out(f"blocking factor: {'Phi_%d' % blocking if isinstance(blocking, int) else blocking}")
    elif action == "tower":
        if args.m_level and args.m_level != 1:
            tower = knots.composite_tower(K, args.m_level, args.p, args.N, method=args.method)
        else:
            tower = knots.homology_tower(K, args.p, args.N, method=args.method)
        _emit_tower(K, tower, args.format)


def _emit_tower(K, tower, fmt):
    p = tower.p
    scaled = knots.scaled_levels(tower.levels, p)
    if fmt == "json":
        payload = emit.limit_report_dict(tower.report)
        payload.update({
            "alexander": format_polynomial(K.delta),
            "level_base": tower.level_base,
            "h1_sign": tower.sign,
            "h1_limit": emit.padic_json(tower.h1_limit),
            "h1_nonp_limit": emit.padic_json(tower.h1_nonp_limit),
            "levels": [{"n": n, "h1_order": emit.big(v), "non_p_part": emit.big(s)}
                       for (n, v), (_, s) in zip(tower.levels, scaled)],
            "warnings": tower.warnings,
        })
        _out(emit.to_json(payload))
        return
    base = "" if tower.level_base == 1 else f"{tower.level_base}*"
    _out(f"Alexander polynomial D = {format_polynomial(K.delta)}")
    _out(emit.limit_report_text(tower.report))
    source = "Res(t^(p^n)-1, D)" if tower.level_base == 1 else "Res(t^(p^n)-1, D transformed by t -> t^m)"
    _out(f"|H_1| = {tower.sign:+d} * {source} at every level {base}{p}^n, n >= 1")
    _out(f"lim |H_1|       : {emit.padic_text(tower.h1_limit)}")
    if tower.h1_nonp_limit is not None:
        _out(f"lim non-{p} part : {emit.padic_text(tower.h1_nonp_limit)}")
    for (n, v), (_, s) in zip(tower.levels[:6], scaled):
        _out(f"  n={n}: |H_1| = {v}  (non-{p} part {s})")
    for w in tower.warnings:
        _out(f"warning: {w}")


def cmd_curve(args):
    E = curves.EllipticCurveSpec(args.l, args.a, args.b)
    action = args.action
    if action == "count":
        if args.ext == 1:
            _out(str(curves.point_count(E)))
        else:
            _out(str(curves.class_number(curves.base_extend(curves.frobenius_poly(E), args.ext), 1)))
    elif action == "frobenius":
        data = curves.base_extend(curves.frobenius_poly(E), args.ext)
        if args.format == "json":
            _out(emit.to_json({"q": emit.big(data.q), "genus": data.genus, "F": data.F, "L": data.L}))
        else:
            _out(f"F(t) = {format_polynomial(data.F)}\nL(t) = {format_polynomial(data.L)}\nq = {data.q}")
    elif action == "classify":
        info = curves.classify(E, args.D)
        if args.format == "json":
            _out(emit.to_json(info))
        else:
            _out(f"{info['class']} (count {info['count']}, trace {info['trace']})")
    elif action == "tower":
        rep = curves.class_tower(E, args.ext, args.p, args.N, method=args.method)
        _emit_limit(rep, args.format)


def cmd_table(args):
    if args.action == "list":
        for t in REGISTRY.values():
            _out(f"{t.table_id:12s} {t.title}")
        return 0
    if args.all:
        ids = list(REGISTRY)
    elif args.table_id:
        ids = [args.table_id]
    else:
        print("padic-towers table run: error: give a table id or --all", file=sys.stderr)
        return EXIT_USAGE
    results = [run_table(i) for i in ids]
    chunks = []
    for r in results:
        rows = [(f"{row.label} (expected)", row.expected) for row in r.rows]
        rows += [(f"{row.label} (computed)", row.actual) for row in r.rows]
        if args.format == "json":
            chunks.append({
                "id": r.table_id, "title": r.title, "anchor": r.anchor,
                "passed": r.passed, "columns": r.columns,
                "rows": [{"label": row.label,
                          "expected": [None if v is None else emit.big(v) for v in row.expected],
                          "computed": [None if v is None else emit.big(v) for v in row.actual],
                          "passed": row.passed} for row in r.rows],
                "notes": r.notes,
            })
        elif args.format == "csv":
            chunks.append(f"# {r.table_id}: {'PASS' if r.passed else 'FAIL'}\n" + emit.table_csv(r.columns, rows))
        else:
            body = emit.table_markdown(r.columns, rows)
            notes = "".join(f"\n\n_{n}_" for n in r.notes)
            chunks.append(f"### {r.table_id}: {r.title} - {'PASS' if r.passed else 'FAIL'}\n\n"
                          f"source: `{r.anchor}`\n\n{body}{notes}\n")
    _out(emit.to_json(chunks) if args.format == "json" else "\n".join(chunks))
    failed = [r for r in results if not r.passed]
    if failed:
        raise TableMismatch("\n".join(line for r in failed for line in r.diff()))
    return 0


def cmd_selfcheck(args):
    results = run_selfcheck(args.cases, args.seed, args.N, args.jobs)
    counts = {}
    for r in results:
        counts[r.status] = counts.get(r.status, 0) + 1
        if r.status == "fail":
            _out(f"FAIL case {r.index}: coeffs={list(r.coeffs)}, p = {r.p}: {r.detail}")
    _out(" ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    if counts.get("fail"):
        return 1
    return 0


# --- parser ----------------------------------------------------------------

def _add_format(p, choices=("text", "json")):
    p.add_argument("--format", choices=choices, default=choices[0])


def _add_method(p):
    p.add_argument("--method", choices=("formula", "sequence", "both"), default="formula")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="padic-towers",
                     description="Cyclic resultants, their p-adic limits, and knot and curve towers.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("res", help="exact Res(t^n - 1, f)")
    p.add_argument("-f", required=True, help='polynomial, e.g. "t^2-3t+1" or "coeffs=[1,-3,1]"')
    p.add_argument("-n", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=cmd_res)

    p = sub.add_parser("limit", help="p-adic limit of Res(t^(p^n) - 1, f)")
    p.add_argument("-f", required=True)
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-N", type=int, default=8, help="p-adic digits")
    _add_method(p)
    _add_format(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("invariants", help="lambda, mu, nu")
    p.add_argument("-f", required=True)
    p.add_argument("-p", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("knot", help="knot towers")
    kinds = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    k = kinds.add_parser("torus")
    k.add_argument("-a", type=int, required=True)
    k.add_argument("-b", type=int, required=True)
    _add_knot_actions(k)
    k = kinds.add_parser("twist")
    k.add_argument("-m", dest="m_twist", type=int, required=True, help="J(2, 2m)")
    _add_knot_actions(k)
    k = kinds.add_parser("poly")
    k.add_argument("-f", required=True, help="Alexander polynomial")
    k.add_argument("--allow-unnormalized", action="store_true",
                   help="accept D(1) != +-1 (towers then carry a warning)")
    _add_knot_actions(k)

    p = sub.add_parser("curve", help="elliptic curve y^2 = x^3 + a x + b over F_l")
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--ext", type=int, default=1, help="constant field extension degree")
    acts = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    a = acts.add_parser("count")
    a = acts.add_parser("frobenius")
    _add_format(a)
    a = acts.add_parser("classify")
    a.add_argument("--D", type=int, default=None, help="CM discriminant to cross-check")
    _add_format(a)
    a = acts.add_parser("tower")
    a.add_argument("-p", type=int, required=True)
    a.add_argument("-N", type=int, default=8)
    _add_method(a)
    _add_format(a)
    p.set_defaults(func=cmd_curve, format="text")

    p = sub.add_parser("table", help="golden tables")
    acts = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    acts.add_parser("list")
    a = acts.add_parser("run")
    a.add_argument("table_id", nargs="?")
    a.add_argument("--all", action="store_true")
    a.add_argument("--format", choices=("md", "csv", "json"), default="md")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("selfcheck", help="random formula-vs-oracle comparison")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-N", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _add_knot_actions(k):
    acts = k.add_subparsers(dest="action", required=True, parser_class=_Parser)
    acts.add_parser("alexander")
    a = acts.add_parser("order")
    a.add_argument("-n", type=int, required=True)
    a = acts.add_parser("livingston")
    _add_format(a)
    a = acts.add_parser("tower")
    a.add_argument("-p", type=int, required=True)
    a.add_argument("-m", dest="m_level", type=int, default=1, help="levels m * p^n")
    a.add_argument("-N", type=int, default=8)
    _add_method(a)
    _add_format(a)
    k.set_defaults(func=cmd_knot, format="text")


def main(argv=None) -> int:
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code = args.func(args)
    except TowerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return code or 0


if __name__ == "__main__":
    sys.exit(main())
