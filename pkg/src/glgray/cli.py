"""Command line: ``glgray list | verify | bench | graph``."""

from __future__ import annotations

import argparse
import statistics
import sys
from contextlib import contextmanager

from .base2q import SearchExhausted
from .gf import NotAPrimePower, make_field
from .induct import BadTransition, UnsupportedCase
from .matgroup import format_matrix, format_op, parse_matrix
from .stream import END, PathStream
from .transitions import parse_graph
from .verify import TooLarge, build_cayley_graph, check_all_pairs, to_dot, validate_listing


class UsageError(Exception):
    pass


def _common(p: argparse.ArgumentParser, endpoints: bool = True) -> None:
    p.add_argument("-n", type=int, required=True, help="matrix dimension")
    p.add_argument("-q", type=int, required=True, help="field order (prime power)")
    p.add_argument("-T", default="path", help='preset (path, complete, star-in-out) or "n=..;edges=(i,j),..."')
    if endpoints:
        p.add_argument("--from", dest="start", help="first matrix, e.g. 1,0;0,1")
        p.add_argument("--to", dest="end", help="last matrix")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="glgray", description="Gray codes for invertible matrices over finite fields.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list GL(n, q) so that neighbours differ by one row operation")
    _common(p)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--deltas", action="store_true", help="print the row operations instead of matrices")
    mode.add_argument("--both", action="store_true", help="print '<matrix>\\t<op>' lines")

    p = sub.add_parser("verify", help="check a listing file")
    _common(p)
    p.add_argument("input", nargs="?", help="listing file ('-' or omitted: stdin)")
    p.add_argument("--all-pairs", action="store_true", help="run the construction on every ordered pair instead")
    p.add_argument("--brute", action="store_true", help="with --all-pairs: also run the brute-force oracle")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for --all-pairs")

    p = sub.add_parser("bench", help="per-step operation counts as CSV")
    _common(p)
    p.add_argument("--budget", type=float, help="fail (exit 1) if some step exceeds BUDGET * n^3 * q^3 ops")

    p = sub.add_parser("graph", help="write the Cayley graph in DOT format")
    _common(p, endpoints=False)
    return ap


@contextmanager
def _output(path):
    if path:
        with open(path, "w") as fh:
            yield fh
    else:
        yield sys.stdout


def _setup(args):
    try:
        make_field(args.q)
    except NotAPrimePower as e:
        raise UsageError(str(e)) from None
    try:
        T = parse_graph(args.T, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    x = y = None
    try:
        if getattr(args, "start", None):
            x = parse_matrix(args.start, args.q)
        if getattr(args, "end", None):
            y = parse_matrix(args.end, args.q)
    except ValueError as e:
        raise UsageError(f"bad matrix: {e}") from None
    return T, x, y


def _open(args):
    T, x, y = _setup(args)
    try:
        s = PathStream(args.n, args.q, T, x, y)
        first = s.next()
    except (UnsupportedCase, BadTransition, SearchExhausted, ValueError) as e:
        raise UsageError(str(e)) from None
    return T, s, first


def cmd_list(args) -> int:
    _, s, X = _open(args)
    with _output(args.out) as out:
        while X is not END:
            if args.deltas:
                if s.prev is not None:
                    out.write(format_op(s.emit_delta()) + "\n")
            elif args.both:
                op = format_op(s.emit_delta()) if s.prev is not None else "-"
                out.write(f"{format_matrix(X)}\t{op}\n")
            else:
                out.write(format_matrix(X) + "\n")
            X = s.next()
    return 0


def _read_listing(fh, q):
    out = []
    for k, line in enumerate(fh, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_matrix(line.split("\t")[0], q))
        except ValueError as e:
            raise UsageError(f"line {k}: {e}") from None
    return out


def cmd_verify(args) -> int:
    T, x, y = _setup(args)
    if args.all_pairs:
        try:
            res = check_all_pairs(args.n, args.q, T, brute=args.brute, jobs=args.jobs)
        except TooLarge as e:
            raise UsageError(str(e)) from None
        bad = [r for r in res if not r[2] or (args.brute and r[3] is False)]
        agree = sum(1 for r in res if r[3] is None or r[2] == r[3])
        with _output(args.out) as out:
            out.write(f"pairs={len(res)} construction_ok={sum(r[2] for r in res)}")
            if args.brute:
                out.write(f" oracle_found={sum(bool(r[3]) for r in res)} agree={agree}")
            out.write("\n")
            for X, Y, ok, found in bad[:10]:
                out.write(f"FAIL {format_matrix(X)} -> {format_matrix(Y)} construction={ok} oracle={found}\n")
        return 0 if not bad else 1
    if args.input in (None, "-"):
        listing = _read_listing(sys.stdin, args.q)
    else:
        try:
            with open(args.input) as fh:
                listing = _read_listing(fh, args.q)
        except OSError as e:
            raise UsageError(str(e)) from None
    rep = validate_listing(args.n, args.q, T, listing, x, y)
    with _output(args.out) as out:
        out.write(str(rep) + "\n")
    return 0 if rep.ok else 1


def cmd_bench(args) -> int:
    _, s, X = _open(args)
    while X is not END:
        X = s.next()
    steps = s.step_ops[:-1]  # the last call only reports the end
    scale = args.n ** 3 * args.q ** 3
    with _output(args.out) as out:
        out.write("step,ops\n")
        for k, c in enumerate(steps):
            out.write(f"{k},{c}\n")
        out.write(f"# emitted={s.emitted} max={max(steps)} median={statistics.median(steps)} "
                  f"max_over_n3q3={max(steps) / scale:.4f} max_depth={s.max_depth} "
                  f"preprocessing_s={s.preprocess_seconds:.3f} first_step={steps[0]}\n")
    if args.budget is not None and max(steps) > args.budget * scale:
        sys.stderr.write(f"glgray: delay {max(steps)} exceeds budget {args.budget * scale:.0f}\n")
        return 1
    return 0


def cmd_graph(args) -> int:
    T, _, _ = _setup(args)
    try:
        g = build_cayley_graph(args.n, args.q, T)
    except TooLarge as e:
        raise UsageError(str(e)) from None
    with _output(args.out) as out:
        out.write(to_dot(g, f"G_{args.n}_{args.q}"))
    return 0


COMMANDS = {"list": cmd_list, "verify": cmd_verify, "bench": cmd_bench, "graph": cmd_graph}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        sys.stderr.write(f"glgray: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
