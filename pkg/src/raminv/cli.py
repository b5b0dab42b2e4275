"""Command line entry point: raminv <command> [options].

Exit status: 0 success, 1 verification mismatch, 2 usage error,
3 numeric failure (rounding residual never settled).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import mpmath

from . import classpoly, cmcurve, etaeval, orderunits, reciprocity, verify

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(obj, as_json: bool, text: str | None = None):
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(text if text is not None else json.dumps(obj, indent=2))


def _report(checks, as_json: bool) -> int:
    ok = all(c.ok for c in checks)
    if as_json:
        print(json.dumps({"ok": ok, "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]}, indent=2))
    else:
        for c in checks:
            print(c.line())
        print(f"{sum(c.ok for c in checks)}/{len(checks)} passed")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_classpoly(args) -> int:
    kind = classpoly.KIND_ALIASES.get(args.kind, args.kind)
    if args.cache:
        poly = classpoly.ClassPolyCache(args.cache).get_or_build(args.n, kind, args.prec, args.jobs)
    else:
        poly = classpoly.build(args.n, kind, args.prec, args.jobs)
    _emit(poly.to_json(), args.json, str(poly))
    return EXIT_OK


def cmd_gencurve(args) -> int:
    qn = None
    if args.cache:
        qn = classpoly.ClassPolyCache(args.cache).get_or_build(args.n, "qn", args.prec, args.jobs).coeffs
    try:
        res = cmcurve.generate_curve(args.n, args.p, args.m, args.prec, qn=qn)
    except cmcurve.CMFailure as e:
        print(str(e), file=sys.stderr)
        return EXIT_MISMATCH
    d = res.to_json()
    text = "\n".join(["y^2 = x^3 + a x + b over F_p", f"a = {d['a']}", f"b = {d['b']}", f"j = {d['j']}", f"twisted = {d['twisted']}"])
    _emit(d, args.json, text)
    return EXIT_OK


def cmd_cmcheck(args) -> int:
    try:
        prm = cmcurve.cm_params_check(args.n, args.p, args.m)
    except ValueError as e:
        _emit({"valid": False, "reason": str(e)}, args.json, f"invalid: {e}")
        return EXIT_MISMATCH
    d = {"valid": True, "n": prm.n, "p": str(prm.p), "m": str(prm.m), "t": str(prm.t), "s": str(prm.s)}
    _emit(d, args.json, f"valid: t = {prm.t}, s = {prm.s}")
    return EXIT_OK


def cmd_units(args) -> int:
    desc = orderunits.group_structure(args.modulus, args.n)
    d = desc.to_json()
    _emit(d, True)
    return EXIT_OK


def cmd_action(args) -> int:
    x = orderunits.parse_elem(args.generator, args.n).reduce(reciprocity.N)
    if not orderunits.is_unit(x, reciprocity.N):
        raise UsageError(f"{args.generator} is not a unit modulo 72")
    imgs = reciprocity.image_strings(reciprocity.element_action(x))
    _emit({"n": args.n, "generator": str(x), "images": imgs}, args.json, "\n".join(f"g{i} -> {s}" for i, s in enumerate(imgs)))
    return EXIT_OK


def cmd_invariant_test(args) -> int:
    h = reciprocity.named_expr(args.expr)
    v = reciprocity.is_class_invariant(h, args.n)
    d = {"n": args.n, "expr": str(h), "invariant": v.invariant}
    if not v.invariant:
        d["witness"] = str(v.witness)
        d["image"] = str(v.image)
    _emit(d, True)
    return EXIT_OK


def cmd_eval(args) -> int:
    prec = args.prec or 128
    fn = {"tn": etaeval.t_value, "Hn": etaeval.h_value, "An": etaeval.a_value, "j": etaeval.j_value}[args.what]
    val = fn(args.n, prec)
    digits = int(prec * 0.30103)
    with mpmath.workprec(prec):
        re, im = mpmath.nstr(mpmath.re(val), digits), mpmath.nstr(mpmath.im(val), 8)
    _emit({"n": args.n, "what": args.what, "prec": prec, "re": re, "im": im}, args.json, f"{re}  (imag {im})")
    return EXIT_OK


def cmd_verify_tables(args) -> int:
    fn = verify.TABLE_CHECKS[args.table]
    return _report(fn(jobs=args.jobs), args.json)


def cmd_properties(args) -> int:
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        checks += verify.SUITES[name](seed=args.seed)
    return _report(checks, args.json)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--prec", type=int, default=None, help="working precision in bits")
    common.add_argument("--cache", default=None, help="JSON-lines class polynomial cache")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")

    ap = argparse.ArgumentParser(prog="raminv", description="Class invariants from Ramanujan's eta quotients")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classpoly", parents=[common], help="build a class polynomial")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", required=True, choices=["pn", "qn", "g2-12", "g2-6", "g2pow12", "g2pow6"])
    p.set_defaults(func=cmd_classpoly)

    for name, func in (("gencurve", cmd_gencurve), ("cmcheck", cmd_cmcheck)):
        p = sub.add_parser(name, parents=[common], help="CM curve with m points" if name == "gencurve" else "check (n, p, m)")
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--p", type=int, required=True)
        p.add_argument("--m", type=int, required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("units", parents=[common], help="structure of (O/NO)*")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--modulus", type=int, default=72, choices=[72, 9, 8, 3])
    p.set_defaults(func=cmd_units)

    p = sub.add_parser("action", parents=[common], help="images of g0..g3 under a unit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--generator", required=True, help="e.g. 5t+7")
    p.set_defaults(func=cmd_action)

    p = sub.add_parser("invariant-test", parents=[common], help="is a named expression a class invariant")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--expr", required=True, choices=sorted(reciprocity.NAMED_EXPRS))
    p.set_defaults(func=cmd_invariant_test)

    p = sub.add_parser("eval", parents=[common], help="numerical value at (-1 + sqrt(-n))/2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--what", required=True, choices=["tn", "Hn", "An", "j"])
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify-tables", parents=[common], help="recompute and diff the embedded tables")
    p.add_argument("table", choices=sorted(verify.TABLE_CHECKS))
    p.set_defaults(func=cmd_verify_tables)

    p = sub.add_parser("properties", parents=[common], help="run a property suite")
    p.add_argument("suite", choices=sorted(verify.SUITES) + ["all"])
    p.set_defaults(func=cmd_properties)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.jobs < 1:
        ap.error("--jobs must be at least 1")
    if args.prec is not None and args.prec < 16:
        ap.error("--prec must be at least 16")
    try:
        return args.func(args)
    except classpoly.PrecisionError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
