"""Command line entry point.

Exit codes: 0 success, 1 input error, 2 numeric failure.  Data goes to
stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import output
from .errors import InputError, NumericError
from .harness import DEFAULT_SCHEDULE, DEFAULT_SEED, convergence_table, sandwich_check
from .parsing import load_matrix, load_vector
from .series import DEFAULT_PRECISION, evaluate_matrix
from .smith import smith_normal_form, verify_decomposition
from .svd import svd
from .tropical import amoeba_sample_line, tropical_line, trop_point


def _schedule(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad schedule {text!r}; expected comma-separated reals") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snflimit",
        description="Smith normal forms over Laurent series and the log_t singular value limit.",
    )
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="retained series terms (default 40)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("smith", help="invariant factors and decomposition certificate")
    p.add_argument("file")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")

    p = sub.add_parser("svd", help="singular values of A(t) at one t")
    p.add_argument("file")
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("converge", help="log_t singular values against invariant factors")
    p.add_argument("file")
    p.add_argument("--schedule", type=_schedule, default=list(DEFAULT_SCHEDULE))
    p.add_argument("--precision", type=int, default=None, dest="sub_precision")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--sandwich", action="store_true", help="also run the sandwich checks, report on stderr")

    p = sub.add_parser("trop", help="componentwise ord of a vector of series")
    p.add_argument("file")

    p = sub.add_parser("amoeba", help="sample the amoeba of x + y + 1 = 0")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--svg", type=Path, default=None)
    return parser


def _precision(args: argparse.Namespace) -> int:
    return getattr(args, "sub_precision", None) or args.precision


def _run(args: argparse.Namespace) -> None:
    out = sys.stdout
    if args.command == "smith":
        a = load_matrix(args.file, _precision(args))
        d = smith_normal_form(a)
        rep = verify_decomposition(a, d)
        if args.json:
            out.write(json.dumps(output.smith_summary(d, rep), indent=2) + "\n")
        elif args.csv:
            out.write(output.smith_csv(d, rep))
        else:
            out.write(output.smith_text(d, rep))

    elif args.command == "svd":
        a = load_matrix(args.file, _precision(args))
        if not 0 < args.t < 1:
            raise InputError(f"--t must lie in (0, 1), got {args.t}")
        res = svd(evaluate_matrix(a, args.t))
        ru, rw = res.unitarity_residuals()
        out.write("singular values (ascending): " + " ".join(output.fmt_float(x) for x in res.singular_values) + "\n")
        out.write(f"unitarity residual U: {output.fmt_float(ru)}\n")
        out.write(f"unitarity residual W: {output.fmt_float(rw)}\n")

    elif args.command == "converge":
        a = load_matrix(args.file, _precision(args))
        try:
            d = smith_normal_form(a)
            rows = convergence_table(a, args.schedule, workers=args.workers, decomposition=d)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        out.write(output.convergence_json(rows) if args.json else output.convergence_csv(rows))
        if args.sandwich:
            for t in args.schedule:
                for k in range(1, a.n + 1):
                    r = sandwich_check(a, t, k, d, seed=args.seed)
                    status = "ok" if r.passed else "VIOLATED"
                    print(
                        f"sandwich t={t!r} k={k}: {r.lower:.6g} <= {r.log_d_k:.6g} <= {r.upper:.6g} {status}",
                        file=sys.stderr,
                    )

    elif args.command == "trop":
        out.write(output.trop_text(trop_point(load_vector(args.file, _precision(args)))))

    elif args.command == "amoeba":
        if not 0 < args.t < 1:
            raise InputError(f"--t must lie in (0, 1), got {args.t}")
        if args.count < 1:
            raise InputError("--count must be positive")
        pts = amoeba_sample_line(1, 1, 1, args.t, args.count, seed=args.seed)
        out.write(output.points_csv(pts))
        if args.svg is not None:
            args.svg.write_text(output.amoeba_svg(pts, tropical_line()), encoding="utf-8")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        _run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
