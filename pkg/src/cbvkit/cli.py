"""Command-line front end: ``cbv verify | table | shuffles | ym``.

Exit codes: 0 when every asserted check passes, 1 when one fails, 2 for
unreadable input or malformed arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import CbvError, IncompleteStructureError, ShapeError
from .homotopy import check_cinfty, classify, map_violations
from .report import Report
from .sampling import DEFAULT_SEED
from .shuffles import enumerate_straight_shuffles
from .strict import StrictStructure, classify_strict
from .structfile import StructureFileError, dump, load, load_theta3
from .tables import MAX_WEIGHT, WEIGHT_BOUND, check_key, render_table, table_records, tabulated_keys
from .ym import M3_VARIANTS, build_ym, random_theta3, verify_ym, ym_carrier

EXIT_OK, EXIT_CHECK, EXIT_PARSE = 0, 1, 2


class UsageError(CbvError):
    pass


def resolve_seed(seed):
    if seed is not None:
        return seed
    env = os.environ.get("CBV_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"CBV_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def parse_tuple(text):
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"malformed tuple {text!r}; expected comma-separated integers") from None
    if not out:
        raise UsageError("empty tuple")
    return out


def check_domain(carrier, poly_degree=None):
    """Wave words by default.  With ``poly_degree``, arities 1 and 2 use explicit
    monomials up to that degree and higher arities keep waves."""
    if not carrier.is_polynomial or poly_degree is None:
        return carrier.test_words

    def words(n):
        return carrier.monomial_words(n, poly_degree) if n <= 2 else carrier.wave_words(n)

    return words


def verify_generating(S, truncation=None, max_arity=3, poly_degree=None):
    """Symmetries of the stored maps, C-infinity relations of the weight-0 row,
    and the classification at ``truncation``."""
    n = truncation if truncation is not None else (S.truncation if S.truncation is not None else 2)
    W = check_domain(S.carrier, poly_degree)
    rep = Report(f"verification of {S.name or 'generating set'} at weight {n}")
    for key in S.keys():
        bad = map_violations(key, S.maps[key], W(key.arity))
        rep.add(f"symmetry {key.ascii()}", not bad, str(bad[0]) if bad else None)
    check_cinfty(S, max_arity, W, rep)
    cls = classify(S, n, W)
    rep.extend(cls)
    bad = [r.check_id.split()[0] for r in cls.results if r.status == "fail"]
    rep.info("nonzero obstructions", ", ".join(bad) if bad else "none")
    return rep


def verify_structure(S, truncation=None, max_arity=3, poly_degree=None):
    if isinstance(S, StrictStructure):
        if poly_degree is not None and S.carrier.is_polynomial:
            S.domain, S.max_poly_degree = "monomial", poly_degree
        return classify_strict(S)
    return verify_generating(S, truncation, max_arity, poly_degree)


def emit(rep, fmt, out):
    if fmt == "structured":
        print(rep.records(), file=out)
    else:
        print(rep.text(), file=out)


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args, out):
    S = load(args.file)
    rep = verify_structure(S, args.truncation, args.max_arity, args.poly_degree)
    emit(rep, args.format, out)
    return EXIT_OK if rep.ok else EXIT_CHECK


def cmd_table(args, out):
    w = args.weight
    if not 0 <= w <= MAX_WEIGHT:
        raise UsageError(f"weight must lie in 0..{MAX_WEIGHT}")
    if args.check and w > WEIGHT_BOUND:
        raise UsageError(f"no reference table above weight {WEIGHT_BOUND}; --check refused")
    print(table_records(w) if args.format == "structured" else render_table(w), file=out)
    if not args.check:
        return EXIT_OK
    seed = resolve_seed(args.seed)
    rep = Report(f"table check, weight {w}, {args.trials} trials, seed {seed}")
    for key in tabulated_keys():
        if key.weight != w:
            continue
        res = check_key(key, trials=args.trials, seed=seed)
        rep.add(f"{key.ascii()} agrees", res.equal, None if res.equal else json.dumps(res.witness))
    emit(rep, args.format, out)
    return EXIT_OK if rep.ok else EXIT_CHECK


def cmd_shuffles(args, out):
    q, p = parse_tuple(args.q), parse_tuple(args.p)
    try:
        found = enumerate_straight_shuffles(q, p)
    except ShapeError as exc:
        raise UsageError(str(exc)) from exc
    for s in found:
        line = {"sigma": list(s.sigma.images), "l": list(s.l), "q": list(s.q), "r": list(s.r), "sign": s.sign()}
        if args.format == "structured":
            print(json.dumps(line), file=out)
        else:
            imgs = " ".join(map(str, s.sigma.images))
            print(f"sigma=[{imgs}] l={s.l} r={s.r} sign={s.sign():+d}", file=out)
    if args.format != "structured":
        print(f"{len(found)} straight shuffles for q={q}, p={p}", file=out)
    return EXIT_OK


def _theta3(args, dim):
    if args.theta3 == "zero":
        return None
    if args.theta3 == "random":
        return random_theta3(ym_carrier(dim), resolve_seed(args.seed), admissible=True)
    return load_theta3(args.theta3, ym_carrier(dim))


def cmd_ym(args, out):
    if not 2 <= args.dim <= 6:
        raise UsageError("--dim must lie in 2..6")
    theta3 = _theta3(args, args.dim)
    if args.export:
        dump(build_ym(args.dim, theta3, args.m3_variant, args.m3_sign), args.export)
        print(f"wrote {args.export}", file=out)
        return EXIT_OK
    words = None
    if args.poly_degree is not None:
        words = check_domain(ym_carrier(args.dim), args.poly_degree)
    rep = verify_ym(args.dim, theta3, args.m3_variant, args.m3_sign, args.max_arity, words)
    emit(rep, args.format, out)
    return EXIT_OK if rep.ok else EXIT_CHECK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    ap = argparse.ArgumentParser(prog="cbv", description="Exact checks for cBV-infinity structures.")
    ap.add_argument("--seed", type=int, default=None, help="sampling seed (falls back to CBV_SEED)")
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="sampling seed")

    v = sub.add_parser("verify", help="verify a JSON structure file")
    v.add_argument("file")
    v.add_argument("--truncation", type=int, default=None)
    v.add_argument("--max-arity", type=int, default=3)
    v.add_argument("--poly-degree", type=int, default=None)
    fmt(v)
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="print obstruction formulas of one weight")
    t.add_argument("--weight", type=int, required=True)
    t.add_argument("--check", action="store_true", help="compare with the reference entries")
    t.add_argument("--trials", type=int, default=6)
    fmt(t)
    t.set_defaults(func=cmd_table)

    s = sub.add_parser("shuffles", help="list decorated straight shuffles")
    s.add_argument("--q", required=True)
    s.add_argument("--p", required=True)
    fmt(s)
    s.set_defaults(func=cmd_shuffles)

    y = sub.add_parser("ym", help="verify the Yang-Mills kinematic algebra")
    y.add_argument("--dim", type=int, default=4)
    y.add_argument("--poly-degree", type=int, default=None)
    y.add_argument("--max-arity", type=int, default=5)
    y.add_argument("--theta3", default="zero", help="zero, random, or a JSON file with a 'theta3' entry list")
    y.add_argument("--m3-variant", choices=M3_VARIANTS, default="covariant")
    y.add_argument("--m3-sign", type=int, choices=(1, -1), default=-1)
    y.add_argument("--export", default=None, help="write the generating set as a structure file and stop")
    fmt(y)
    y.set_defaults(func=cmd_ym)
    return ap


def main(argv=None, out=None):
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (UsageError, StructureFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except IncompleteStructureError as exc:
        print(f"error: {exc} (set metadata.fill_zero to treat missing maps as zero)", file=sys.stderr)
        return EXIT_PARSE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
