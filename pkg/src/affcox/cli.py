"""Command-line front end: ``affcox <verb> ...``."""
import argparse
import json
import math
import sys
from itertools import combinations

from . import __version__
from .classify import classify_diagram, parse_type_name
from .coxeter import parse_coxeter_graph, racg_checks
from .crystal import DEFAULT_SEED, build_affine_group, make_quotient, psi_certificate
from .ef import least_distinguishing_rounds
from .exceptions import AffcoxError, CapExceeded, ParseError, PreconditionError
from .finite import AbelianGroup, format_table, parse_table
from .lattice import primitive_normal_list
from .logic import evaluate, free_vars, parse_formula, solution_set
from .quotients import fingerprint, spacegroup_genus_compare
from .weyl import point_group_for
from .words import element_order, involution_witness, parity, parse_word, word_mul

EXIT_OK, EXIT_IO, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


def parse_mods(text):
    """``"2..8"`` or ``"2,3,5"`` (or a mix such as ``"2..4,7"``)."""
    mods = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                mods.extend(range(int(lo), int(hi) + 1))
            elif part:
                mods.append(int(part))
    except ValueError:
        raise ParseError(f"bad modulus list {text!r}") from None
    if not mods or min(mods) < 1:
        raise ParseError(f"bad modulus list {text!r}")
    return sorted(set(mods))


def _read(path):
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_table(path):
    try:
        return parse_table(_read(path))
    except PreconditionError as exc:
        raise ParseError(f"{path}: {exc}") from None


def _jsonable(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


# -- verbs ---------------------------------------------------------------------

def cmd_classify(args):
    g = parse_coxeter_graph(_read(args.graph_file))
    ctype = classify_diagram(g)
    racg = racg_checks(g)
    parts = ctype.components or (ctype,)
    lines = [f"component {i}: {c.describe()}" for i, c in enumerate(parts)]
    lines.append(f"overall: {ctype.describe()}")
    if racg.applicable:
        lines.append(f"right-angled: irreducible={racg.irreducible_racg} hyperbolic={racg.hyperbolic}")
    data = {"type": ctype.to_json(), "describe": ctype.describe(),
            "components": [c.describe() for c in parts],
            "racg": {"right_angled": racg.right_angled, "irreducible": racg.irreducible_racg,
                     "hyperbolic": racg.hyperbolic}}
    return data, lines


def cmd_build(args):
    g = build_affine_group(args.family)
    cert = psi_certificate(g)
    pg = g.point_group
    lines = [f"{g.family}: Z^{g.rank} x| W0, |W0| = {pg.order}, exponent {pg.exponent}",
             f"certificate: {'all items pass' if cert.ok else 'FAILED ' + str(cert.failures)}",
             f"T/2T order: {cert.torsion_free_quotient_order}"]
    data = {"family": g.family, "rank": g.rank, "point_group_order": pg.order,
            "exponent": pg.exponent, "certificate": cert.to_json()}
    return data, lines


def cmd_quotient(args):
    g = build_affine_group(args.family)
    q = make_quotient(g, args.m)
    fp = fingerprint(q)
    if args.table_out:
        with open(args.table_out, "w", encoding="utf-8") as fh:
            fh.write(format_table(q))
    lines = [f"{g.family} / {args.m}T: order {q.order}"]
    lines += [f"  {k}: {v}" for k, v in fp.to_json().items()]
    return {"family": g.family, "m": args.m, "order": q.order, "fingerprint": fp.to_json()}, lines


def cmd_distinguish(args):
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    if len(families) < 2:
        raise PreconditionError("distinguish needs at least two families")
    mods = parse_mods(args.mods)
    groups = [build_affine_group(f) for f in families]
    if len({g.rank for g in groups}) != 1:
        raise PreconditionError("families must have equal rank")
    pairs, lines = [], []
    for g1, g2 in combinations(groups, 2):
        rep = spacegroup_genus_compare(g1, g2, mods, stop_at_first=True)
        m = rep.distinguished_at
        pairs.append({"pair": [g1.family, g2.family], "modulus": m if m is not None else "tie",
                      "verdict": rep.verdict,
                      "method": rep.results[-1].method})
        lines.append(f"{g1.family} vs {g2.family}: {rep.verdict}")
    return {"families": [g.family for g in groups], "mods": mods, "pairs": pairs}, lines


def cmd_sublattices(args):
    pg = point_group_for(parse_type_name(args.family))
    report = primitive_normal_list(pg, args.bound)
    lines = [f"{len(report.invariant)} invariant sublattices of index <= {args.bound}",
             f"{len(report.primitives)} primitive:"]
    lines += [f"  {L}" for L in report.primitives]
    lines.append("every invariant sublattice is a multiple of a primitive" if report.ok
                 else f"violations: {len(report.violations)}")
    if report.note:
        lines.append(f"note: {report.note}")
    data = report.to_json()
    data.update(family=args.family, bound=args.bound,
                invariant=[L.to_json() for L in report.invariant])
    return data, lines


def cmd_ef(args):
    A, B = _load_table(args.left), _load_table(args.right)
    k = least_distinguishing_rounds(A, B, args.k_max)
    if k is None:
        line = f"II survives to k_max={args.k_max}"
    else:
        line = f"Player I wins at k={k}"
    return {"orders": [A.order, B.order], "k_max": args.k_max, "least_rounds": k}, [line]


def _structure(args):
    if args.table:
        return _load_table(args.table), f"table {args.table}"
    if args.abelian:
        moduli = [int(x) for x in args.abelian.split(",")]
        return AbelianGroup(moduli), "abelian " + "x".join(f"Z/{m}" for m in moduli)
    if args.family:
        g = build_affine_group(args.family)
        return make_quotient(g, args.m), f"{g.family} / {args.m}T"
    raise PreconditionError("give a structure: --table, --abelian or --family with --m")


def cmd_eval(args):
    text = _read(args.formula_file) if args.formula_file else args.formula
    if text is None:
        raise PreconditionError("give a formula inline or with --formula-file")
    f = parse_formula(text)
    G, desc = _structure(args)
    assignment = {}
    for item in args.assign or []:
        name, _, value = item.partition("=")
        if not value:
            raise ParseError(f"bad assignment {item!r}")
        assignment[name.strip()] = int(value)
    free = free_vars(f) - set(assignment)
    if len(free) > 1:
        raise PreconditionError(f"formula has free variables {sorted(free)}; assign all but one")
    if free:
        sols = solution_set(f, G, next(iter(free)), assignment)
        lines = [f"{desc}: {len(sols)} solutions", "  " + " ".join(G.label(i) for i in sols)]
        return {"structure": desc, "order": G.order, "variable": next(iter(free)),
                "solutions": sols, "labels": [G.label(i) for i in sols]}, lines
    value = evaluate(f, G, assignment)
    return {"structure": desc, "order": G.order, "value": value}, [f"{desc}: {value}"]


def cmd_ucw(args):
    w = parse_word(args.word, args.rank)
    if args.times:
        w = word_mul(w, parse_word(args.times, w.rank))
    order = element_order(w)
    lines = [f"normal form: {w}", f"order: {order}", f"parity: {parity(w)}"]
    data = {"rank": w.rank, "word": str(w), "order": order, "parity": parity(w)}
    if order == 2:
        wit = involution_witness(w)
        lines.append(f"conjugate of e{wit.target} by {wit.conjugator}")
        data["witness"] = wit.to_json()
    return data, lines


# -- driver --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="affcox", description="Affine Coxeter groups, crystallographic quotients and EF games.")
    p.add_argument("--version", action="version", version=f"affcox {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED,
                        help="seed for all sampling (default 0xC0C5E7E5)")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("classify", parents=[common], help="classify a Coxeter graph file")
    s.add_argument("graph_file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("build", parents=[common], help="build Z^n x| W0 and run its certificate")
    s.add_argument("family", help="e.g. A~2, C~3, G~2")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("quotient", parents=[common], help="fingerprint the quotient by mT")
    s.add_argument("family")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--table-out", help="write the multiplication table to this file")
    s.set_defaults(func=cmd_quotient)

    s = sub.add_parser("distinguish", parents=[common], help="pairwise genus comparison")
    s.add_argument("families", help="comma-separated, e.g. A~3,B~3,C~3")
    s.add_argument("--mods", default="2..8")
    s.set_defaults(func=cmd_distinguish)

    s = sub.add_parser("sublattices", parents=[common], help="invariant and primitive sublattices")
    s.add_argument("family")
    s.add_argument("--bound", type=int, default=16)
    s.set_defaults(func=cmd_sublattices)

    s = sub.add_parser("ef", parents=[common], help="least distinguishing EF rounds of two tables")
    s.add_argument("left")
    s.add_argument("right")
    s.add_argument("--k-max", type=int, default=3)
    s.set_defaults(func=cmd_ef)

    s = sub.add_parser("eval", parents=[common], help="evaluate a first-order formula")
    s.add_argument("formula", nargs="?")
    s.add_argument("--formula-file")
    s.add_argument("--table")
    s.add_argument("--abelian", help="moduli, e.g. 2,2")
    s.add_argument("--family")
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--assign", action="append", metavar="VAR=INDEX")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("ucw", parents=[common], help="words in the universal Coxeter group")
    s.add_argument("word", help='e.g. "e1 e2 e1"')
    s.add_argument("--rank", type=int)
    s.add_argument("--times", help="multiply on the right by this word")
    s.set_defaults(func=cmd_ucw)

    return p


def _options(args):
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "json")}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    header = f"affcox {__version__} {args.verb} " + " ".join(
        f"{k}={hex(v) if k == 'seed' else v}" for k, v in _options(args).items()
        if k != "verb" and v is not None)
    try:
        data, lines = args.func(args)
    except OSError as exc:
        return _fail(args, header, EXIT_IO, exc)
    except ParseError as exc:
        return _fail(args, header, EXIT_PARSE, exc)
    except (PreconditionError, CapExceeded, AffcoxError, ValueError) as exc:
        return _fail(args, header, EXIT_PRECONDITION, exc)
    if args.json:
        out = {"schema": f"affcox.{args.verb}/1", "version": __version__,
               "options": _jsonable(_options(args))}
        out.update(_jsonable(data))
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print(f"# {header}")
        for line in lines:
            print(line)
    return EXIT_OK


def _fail(args, header, code, exc):
    if args.json:
        print(json.dumps({"schema": "affcox.error/1", "version": __version__, "verb": args.verb,
                          "exit_code": code, "error": str(exc)}, indent=2))
    else:
        print(f"# {header}", file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
