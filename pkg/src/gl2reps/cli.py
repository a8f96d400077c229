"""Command-line front end.

    gl2reps classify --flavor padic --p 2 --r 2 [--out FILE] [--cap N]
    gl2reps oracle   --flavor padic --p 2 --r 2 [--seed S] [--out FILE]
    gl2reps verify   --a FILE --b FILE [--tol 1e-6]

Exit codes: 0 success / residual below tolerance; 2 certificate failure
(classify still writes the table, flagged "certified": false); 64 bad
invocation; 65 spec mismatch between the two verify inputs.

classify keeps a cache of certified tables keyed by
(flavor, p, r, schema_version) under $GL2REPS_CACHE (default
./.gl2reps-cache); stale-schema entries are ignored.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .ring import RingSpec
from .matgroup import GroupTooLargeError, conjugacy_classes, group_enumerate
from .context import build_context
from . import driver as driver_mod
from . import oracle as oracle_mod
from . import tableio

EXIT_OK = 0
EXIT_UNCERTIFIED = 2
EXIT_USAGE = 64
EXIT_SPEC_MISMATCH = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _spec_args(sub):
    sub.add_argument("--flavor", choices=("padic", "laurent"), default="padic")
    sub.add_argument("--p", type=int, required=True)
    sub.add_argument("--r", type=int, required=True)
    sub.add_argument("--out", default=None)


def make_parser():
    parser = _Parser(prog="gl2reps")
    subs = parser.add_subparsers(dest="command", required=True)

    c = subs.add_parser("classify", help="build and certify a character table")
    _spec_args(c)
    c.add_argument("--cap", type=int, default=30000)
    c.add_argument("--no-cache", action="store_true")

    o = subs.add_parser("oracle", help="brute-force character table")
    _spec_args(o)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--cap", type=int, default=30000)

    v = subs.add_parser("verify", help="match two table files row by row")
    v.add_argument("--a", required=True)
    v.add_argument("--b", required=True)
    v.add_argument("--tol", type=float, default=1e-6)
    return parser


def _emit(data, out):
    if out:
        from .matgroup import atomic_write_json

        atomic_write_json(out, data)
        print(f"wrote {out}")
    else:
        print(json.dumps(data, indent=1))


def _make_spec(args):
    try:
        return RingSpec(args.flavor, args.p, args.r)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def cmd_classify(args):
    spec = _make_spec(args)
    if not args.no_cache:
        cached = tableio.load_cached_table(spec)
        if cached is not None:
            _emit(cached, args.out)
            print("(from cache)", file=sys.stderr)
            return EXIT_OK
    try:
        table = driver_mod.classify(spec, cap=args.cap)
    except GroupTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except driver_mod.CompletenessError as exc:
        if exc.table is None:
            raise
        data = tableio.table_to_jsonable(exc.table, certified=False)
        _emit(data, args.out)
        print(f"certificate failure: {exc}", file=sys.stderr)
        return EXIT_UNCERTIFIED
    data = tableio.table_to_jsonable(table, certified=True)
    if not args.no_cache:
        tableio.store_cached_table(spec, data)
    _emit(data, args.out)
    return EXIT_OK


def cmd_oracle(args):
    spec = _make_spec(args)
    try:
        G = group_enumerate(spec, cap=args.cap)
    except GroupTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    classes = conjugacy_classes(G)
    table = oracle_mod.oracle_table(G, seed=args.seed, classes=classes, spec=spec)
    _emit(tableio.table_to_jsonable(table, certified=True), args.out)
    return EXIT_OK


def cmd_verify(args):
    a = tableio.read_table(args.a)
    b = tableio.read_table(args.b)
    if a.spec != b.spec:
        print("error: spec mismatch", file=sys.stderr)
        return EXIT_SPEC_MISMATCH
    if len(a.labels) != len(b.labels):
        print(
            f"row counts differ: {len(a.labels)} vs {len(b.labels)}",
            file=sys.stderr,
        )
        return 1
    # align class columns through the canonical class layout of the spec
    ctx = build_context(a.spec)
    index = ctx.classes.index
    cols_a = [index[rep] for rep in a.class_reps]
    cols_b = [index[rep] for rep in b.class_reps]
    if sorted(cols_a) != list(range(len(ctx.classes))) or sorted(cols_b) != list(
        range(len(ctx.classes))
    ):
        print("error: class representatives do not cover the classes",
              file=sys.stderr)
        return 1
    va = np.empty_like(a.values)
    vb = np.empty_like(b.values)
    va[:, cols_a] = a.values
    vb[:, cols_b] = b.values
    _, residual = driver_mod.match_rows(va, vb)
    print(f"max residual: {residual:.3e}")
    return EXIT_OK if residual < args.tol else 1


def main(argv=None):
    args = make_parser().parse_args(argv)
    handlers = {
        "classify": cmd_classify,
        "oracle": cmd_oracle,
        "verify": cmd_verify,
    }
    raise SystemExit(handlers[args.command](args))


if __name__ == "__main__":
    main()
