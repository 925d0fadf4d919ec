"""Command line front end: ``qva-forge <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

import argparse
import re
import sys

from . import axioms, catalog
from .bichar import classify
from .errors import QvaError
from .expr import parse_expr
from .fnring import RatFn, iota_expand, order_str
from .modelio import load_model_file, parse_element
from .qva import nop, ope, residue, s_gamma, s_tau, simplify, x2, x3
from .superhopf import Element, TensorElement, mono_str

_MAP = re.compile(r"i_\{?(\w+);(\w+)\}?$")


class InputError(Exception):
    pass


# ---------------------------------------------------------------- output


def _coeff_lines(key, c):
    if isinstance(c, RatFn):
        return [f"{key}\tt^{k}\t{order_str(o)}" for k, o in enumerate(c.orders) if o[0]]
    return [f"{key}\tt^0\t({c})/(1)"]


def machine(obj):
    """Line-stable serialization: one line per (term, t-order), sorted."""
    lines = []
    if isinstance(obj, Element):
        for m, c in obj.terms.items():
            lines += _coeff_lines(mono_str(m), c)
    elif isinstance(obj, TensorElement):
        for k, c in obj.terms.items():
            lines += _coeff_lines("|".join(mono_str(m) for m in k), c)
    elif isinstance(obj, RatFn):
        lines += _coeff_lines("f", obj)
    else:
        lines.append(str(obj))
    return "\n".join(sorted(lines)) if lines else "0"


def _emit(args, text, obj=None):
    if args.format == "machine" and obj is not None:
        print(machine(obj))
    else:
        print(text)


# ---------------------------------------------------------------- commands


def _model(args):
    overrides = {}
    if args.t_order is not None:
        overrides["tTrunc"] = args.t_order
    if args.d_order is not None:
        overrides["dTrunc"] = args.d_order
    if args.degree_bound is not None:
        overrides["degreeBound"] = args.degree_bound
    if args.model:
        return load_model_file(args.model, overrides)
    name = args.builtin or "charged_free_fermion"
    return catalog.builtin(name, T=overrides.get("tTrunc", 4), M=overrides.get("dTrunc", 3),
                           degree_bound=overrides.get("degreeBound", 2))


def _elems(model, texts):
    return [parse_element(t, model.gens) for t in texts]


def _monos(model, texts):
    out = []
    for e in _elems(model, texts):
        if len(e.terms) != 1 or next(iter(e.terms.values())) != 1:
            raise InputError(f"axiom inputs must be single monomials, got {e}")
        out.append(next(iter(e.terms)))
    return out


def cmd_ope(args):
    model = _model(args)
    a, b = _elems(model, [args.a, args.b])
    data = ope(model, a, b)
    if args.format == "machine":
        lines = []
        for n in sorted(data.singular, reverse=True):
            for line in machine(simplify(data.singular[n])).splitlines():
                lines.append(f"pole {n + 1}\t{line}")
        print("\n".join(lines) if lines else "0")
    else:
        print(data)
    return 0


def cmd_nop(args):
    model = _model(args)
    a, b = _elems(model, [args.a, args.b])
    e = simplify(nop(model, a, b))
    _emit(args, str(e), e)
    return 0


def cmd_x2(args):
    model = _model(args)
    a, b = _elems(model, [args.a, args.b])
    e = x2(model, a, b)
    _emit(args, str(e), e)
    return 0


def cmd_x3(args):
    model = _model(args)
    a, b, c = _elems(model, [args.a, args.b, args.c])
    e = x3(model, a, b, c)
    _emit(args, str(e), e)
    return 0


def cmd_residue(args):
    model = _model(args)
    a, b, c = _elems(model, [args.a, args.b, args.c])
    e = residue(model, a, b, c, args.n)
    _emit(args, str(e), e)
    return 0


def cmd_smap(args):
    model = _model(args)
    a, b = _elems(model, [args.a, args.b])
    t = s_tau(model, a, b) if args.kind == "tau" else s_gamma(model, a, b)
    _emit(args, str(t), t)
    return 0


def cmd_classify(args):
    model = _model(args)
    print(classify(model.r))
    return 0


def cmd_expand(args):
    m = _MAP.match(args.map.replace(" ", ""))
    if not m:
        raise InputError(f"--map must look like i_{{z1;z2}}, got {args.map!r}")
    f = parse_expr(args.expr, args.t_order or 4)
    le = iota_expand(f, m.group(1), m.group(2), args.order)
    if args.format == "machine":
        lines = []
        for p in sorted(le.coeffs):
            for line in machine(le.coeffs[p]).splitlines():
                lines.append(f"{m.group(2)}^{p}\t{line[2:]}")
        print("\n".join(lines) if lines else "0")
    else:
        print(le)
    return 0


def cmd_check(args):
    model = _model(args)
    extra = {}
    if args.k is not None:
        extra["k"] = args.k
    if args.nmax is not None:
        extra["Nmax"] = args.nmax
    if extra and args.axiom != "locality":
        raise InputError("--k and --nmax only apply to locality")
    if args.axiom == "all":
        if args.inputs:
            raise InputError("'check all' takes no explicit inputs")
        reports = axioms.run_suite(model, args.bound).reports
    elif args.inputs:
        reports = axioms.check_axiom(model, args.axiom, *_monos(model, args.inputs), **extra)
    else:
        reports = axioms.run_suite(model, args.bound, (args.axiom,), **extra).reports
    failed = [r for r in reports if not r.passed]
    shown = reports if args.verbose else failed
    for r in shown:
        print(r)
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return 1 if failed else 0


# ---------------------------------------------------------------- parser


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--model", metavar="PATH", help="model file")
    src.add_argument("--builtin", choices=catalog.NAMES, help="built-in model (default charged_free_fermion)")
    common.add_argument("--t-order", type=int, help="t truncation T")
    common.add_argument("--d-order", type=int, help="exponential cap M")
    common.add_argument("--degree-bound", type=int, help="monomial bound for validation and checks")
    common.add_argument("--format", choices=("text", "machine"), default="text")

    p = argparse.ArgumentParser(prog="qva-forge", description="Bicharacter quantum vertex algebra toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *pos, help=None):
        sp = sub.add_parser(name, parents=[common], help=help)
        for a in pos:
            sp.add_argument(a)
        sp.set_defaults(fn=fn)
        return sp

    add("ope", cmd_ope, "a", "b", help="singular OPE coefficients")
    add("nop", cmd_nop, "a", "b", help="normal ordered product")
    add("x2", cmd_x2, "a", "b", help="singular multiplication X_{z1,z2}")
    add("x3", cmd_x3, "a", "b", "c", help="triple product X_{z1,z2,z3}")
    sp = add("residue", cmd_residue, "a", "b", "c", help="residue at z1 = z2")
    sp.add_argument("--n", type=int, required=True)
    sp = sub.add_parser("smap", parents=[common], help="braiding maps")
    sp.add_argument("kind", choices=("tau", "gamma"))
    sp.add_argument("a")
    sp.add_argument("b")
    sp.set_defaults(fn=cmd_smap)
    add("classify", cmd_classify, help="Classical / EK / HD label")
    sp = add("expand", cmd_expand, "expr", help="iota expansion of an expression")
    sp.add_argument("--map", required=True, help="i_{z1;z2}: expand in powers of z2")
    sp.add_argument("--order", type=int, required=True)
    sp = sub.add_parser("check", parents=[common], help="axiom checks")
    sp.add_argument("axiom", choices=("all",) + axioms.AXIOMS)
    sp.add_argument("inputs", nargs="*", help="explicit monomial inputs")
    sp.add_argument("--bound", type=int)
    sp.add_argument("--k", type=int, help="locality: t-order")
    sp.add_argument("--nmax", type=int, help="locality: largest N tried")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(fn=cmd_check)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (QvaError, InputError, OSError, ValueError) as exc:
        print(f"qva-forge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
