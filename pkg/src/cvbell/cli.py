"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import figures
from .bell import (
    MAX_EXPAND,
    SettingsTable,
    bell_asymptotic,
    bell_value_equal_settings,
    bell_value_general,
    expansion_json,
)
from .errors import CapacityExceeded, InvalidArgument
from .optimize import maximize_asymptotic, maximize_over_displacement
from .verify import run_checks

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(stream, header, rows) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def _phases(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad phase list {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvbell",
        description="Bell-inequality violations of continuous-variable GHZ states.",
        epilog="Set CVBELL_THREADS to cap worker processes. "
        "Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "expand",
        help="print the N-party combination as JSON",
        description="JSON {n, classes:[{k, num, den_pow2}]}: c[k] = num / 2**den_pow2 is the "
        "coefficient of each term with k primed settings. With --full (n <= 24) adds "
        "terms:[{num, den_pow2, selector_bits}], bit i of selector_bits set when party i+1 is primed.",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--full", action="store_true")

    p = sub.add_parser(
        "eval",
        help="evaluate the combination at one setting",
        description="CSV n,r,j,value,cancellation_estimate (or n,a,value,cancellation_estimate "
        "with --asymptotic). Settings: unprimed 0, primed sqrt(J) e^{i phase}, phase pi/2 "
        "unless --phases is given.",
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float)
    p.add_argument("--j", type=float)
    p.add_argument("--phases", type=_phases)
    p.add_argument("--asymptotic", action="store_true")
    p.add_argument("--a", type=float)

    p = sub.add_parser(
        "max",
        help="maximise over the displacement",
        description="CSV n,mode,arg,value: one 'global' row then one 'local' row per local "
        "maximum. arg is J at fixed --r, or A = J e^{2r} with --asymptotic.",
    )
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r", type=float)
    g.add_argument("--asymptotic", action="store_true")

    p = sub.add_parser(
        "figure",
        help="write figure data as CSV",
        description="Write the data for figure 1, 2 or 3 to --out as CSV.",
        epilog=figures.GRID_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="run cross-path consistency checks")
    p.add_argument("--fast", action="store_true", help="skip the Fock-basis oracle")
    return parser


def cmd_expand(args, out) -> int:
    if args.n < 2:
        raise InvalidArgument(f"--n must be >= 2, got {args.n}")
    if args.full and args.n > MAX_EXPAND:
        raise InvalidArgument(f"--full is limited to n <= {MAX_EXPAND}")
    json.dump(expansion_json(args.n, full=args.full), out)
    out.write("\n")
    return EXIT_OK


def cmd_eval(args, out) -> int:
    if args.asymptotic:
        if args.r is not None or args.j is not None or args.phases is not None:
            raise InvalidArgument("--asymptotic excludes --r, --j and --phases")
        if args.a is None:
            raise InvalidArgument("--asymptotic needs --a")
        bv = bell_asymptotic(args.n, args.a)
        write_csv(out, ("n", "a", "value", "cancellation_estimate"), [(args.n, args.a, bv.value, bv.error)])
        return EXIT_OK
    if args.a is not None:
        raise InvalidArgument("--a needs --asymptotic")
    if args.r is None or args.j is None:
        raise InvalidArgument("eval needs --r and --j (or --asymptotic --a)")
    if args.phases is not None:
        settings = SettingsTable.equal(args.n, args.j, args.phases)
        bv = bell_value_general(args.n, args.r, settings)
    else:
        bv = bell_value_equal_settings(args.n, args.r, args.j)
    write_csv(
        out,
        ("n", "r", "j", "value", "cancellation_estimate"),
        [(args.n, args.r, args.j, bv.value, bv.error)],
    )
    return EXIT_OK


def cmd_max(args, out) -> int:
    if args.asymptotic:
        res = maximize_asymptotic(args.n)
    else:
        res = maximize_over_displacement(args.n, args.r)
    rows = [(args.n, "global", res.argmax, res.value)]
    rows += [(args.n, "local", x, y) for x, y in res.local_maxima]
    write_csv(out, ("n", "mode", "arg", "value"), rows)
    return EXIT_OK


def cmd_figure(args, out) -> int:
    try:
        fh = open(args.out, "w", newline="")
    except OSError as exc:
        print(f"cvbell: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    with fh:
        rows = figures.figure_rows(args.which)
        try:
            write_csv(fh, figures.HEADERS[args.which], rows)
        except OSError as exc:
            print(f"cvbell: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK


def cmd_verify(args, out) -> int:
    results = run_checks(fast=args.fast)
    width = max(len(name) for name, _, _ in results)
    for name, ok, detail in results:
        out.write(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}\n")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VERIFY


COMMANDS = {
    "expand": cmd_expand,
    "eval": cmd_eval,
    "max": cmd_max,
    "figure": cmd_figure,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (InvalidArgument, CapacityExceeded) as exc:
        print(f"cvbell {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
