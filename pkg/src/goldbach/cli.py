"""Command-line workbench.

Exit codes: 0 success, 1 usage or domain error, 2 capacity guard,
3 Goldbach counterexample found. Every error line starts with
``error:<category>:``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from decimal import Decimal
from pathlib import Path

from . import analysis, estimators, partition
from .errors import CapacityError, GoldbachError, OutOfRangeError
from .parallel import THREADS_ENV, resolve_threads
from .partition import CounterexampleFound
from .sieve import LIMIT_GUARD, build_prime_table

DEFAULT_LIMIT = 100_000

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CAPACITY = 2
EXIT_COUNTEREXAMPLE = 3


class UsageError(GoldbachError):
    category = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def jfloat(x: float) -> float:
    """Round to 15 significant digits; json then prints the shortest repr."""
    return float(f"{x:.15g}")


def cfloat(x: float) -> str:
    """12 significant digits, never in exponent notation."""
    if x != x or x in (float("inf"), float("-inf")):
        return str(x)
    text = format(Decimal(f"{x:.12g}"), "f")
    return "0" if text in ("-0", "0") else text


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _table(args, required: int):
    """Prime table covering ``required``; ``--limit`` caps it if given."""
    limit = args.limit
    if limit is None:
        limit = max(required, 2)
    elif limit < required:
        raise OutOfRangeError(f"request needs limit >= {required}, but --limit is {limit}")
    if limit > LIMIT_GUARD:
        raise CapacityError(f"limit {limit} exceeds the sieve guard {LIMIT_GUARD}")
    return build_prime_table(limit)


# -- subcommands ----------------------------------------------------------


def cmd_sieve_info(args):
    limit = DEFAULT_LIMIT if args.limit is None else args.limit
    if limit > LIMIT_GUARD:
        raise CapacityError(f"limit {limit} exceeds the sieve guard {LIMIT_GUARD}")
    t0 = time.perf_counter()
    t = build_prime_table(limit)
    elapsed = time.perf_counter() - t0
    _emit(f"limit {t.limit}\npi {t.prime_count(t.limit)}\nseconds {elapsed:.6f}\n", args.out)


def cmd_count(args):
    t = _table(args, args.n)
    _emit(f"{args.n} {partition.goldbach_count(t, args.n)}\n", args.out)


def cmd_witness(args):
    t = _table(args, args.n)
    pair = partition.goldbach_witness(t, args.n)
    if pair is None:
        raise CounterexampleFound([args.n])
    _emit(f"{args.n} {pair[0]} {pair[1]}\n", args.out)


def cmd_scan(args):
    t = _table(args, args.end)
    series = partition.goldbach_scan(t, args.start, args.end, threads=args.threads)
    fmt = args.format or "csv"
    text = partition.series_to_json(series) if fmt == "json" else partition.series_to_csv(series)
    _emit(text, args.out)
    zeros = partition.verify_positive(series)
    if zeros:
        raise CounterexampleFound(zeros)


def cmd_estimate(args):
    t = _table(args, max(args.n, args.prime_limit))
    c = estimators.hardy_littlewood_constant(args.prime_limit, table=t)
    b = estimators.estimate_breakdown(t, c, args.n)
    fields = b.as_dict()
    if (args.format or "json") == "json":
        doc = {k: (v if isinstance(v, int) else jfloat(v)) for k, v in fields.items()}
        _emit(_dump_json(doc), args.out)
    else:
        header = ",".join(fields)
        row = ",".join(str(v) if isinstance(v, int) else cfloat(v) for v in fields.values())
        _emit(f"{header}\n{row}\n", args.out)


def cmd_check_strong(args):
    t = _table(args, args.end)
    rows = estimators.strong_form_scan(t, args.start, args.end, threads=args.threads)
    if (args.format or "csv") == "json":
        doc = [
            {
                "n": r.n, "G": r.g, "s0": jfloat(r.s0), "s1": jfloat(r.s1), "s2": jfloat(r.s2),
                "margin": jfloat(r.margin), "pass": r.passed,
            }
            for r in rows
        ]
        text = _dump_json(doc)
    else:
        lines = ["n,G,s0,s1,s2,margin,pass"]
        lines += [
            f"{r.n},{r.g},{cfloat(r.s0)},{cfloat(r.s1)},{cfloat(r.s2)},{cfloat(r.margin)},"
            f"{'true' if r.passed else 'false'}"
            for r in rows
        ]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    failures = sum(not r.passed for r in rows)
    worst = min(rows, key=lambda r: r.margin)
    print(
        f"checked {len(rows)} values, {failures} failures, "
        f"min margin {cfloat(worst.margin)} at n={worst.n}",
        file=sys.stderr,
    )


def cmd_check_chebyshev(args):
    t = _table(args, args.end)
    rep = estimators.chebyshev_scan(t, args.start, args.end)
    if (args.format or "csv") == "json":
        doc = {
            "start": rep.start, "end": rep.end,
            "min_ratio": jfloat(rep.min_ratio), "argmin": rep.argmin,
            "max_ratio": jfloat(rep.max_ratio), "argmax": rep.argmax,
            "violations": [
                {"n": n, "pi": pi, "ratio": jfloat(r), "bound": side}
                for n, pi, r, side in rep.violations
            ],
        }
        text = _dump_json(doc)
    else:
        lines = [
            "start,end,min_ratio,argmin,max_ratio,argmax,violations",
            f"{rep.start},{rep.end},{cfloat(rep.min_ratio)},{rep.argmin},"
            f"{cfloat(rep.max_ratio)},{rep.argmax},{len(rep.violations)}",
            "",
            "n,pi,ratio,bound",
        ]
        lines += [f"{n},{pi},{cfloat(r)},{side}" for n, pi, r, side in rep.violations]
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)


def cmd_constant(args):
    if args.prime_limit > LIMIT_GUARD:
        raise CapacityError(f"prime limit {args.prime_limit} exceeds the sieve guard {LIMIT_GUARD}")
    c = estimators.hardy_littlewood_constant(args.prime_limit)
    _emit(f"{c:.12g}\n", args.out)


def cmd_envelope(args):
    series = partition.series_from_text(_read(args.input))
    env = analysis.extract_envelope(series)
    _emit(env.to_json(), args.out)


def cmd_fit(args):
    env = analysis.Envelope.from_json(_read(args.input))
    points = [p for p in env.side(args.side) if p.n >= args.min_n]
    fit = analysis.fit_exponential(points, min_g=args.min_g)
    if args.calibrate:
        if args.series:
            series = partition.series_from_text(_read(args.series))
            fit = analysis.calibrate(fit, series, args.side, n_min=args.min_n)
        else:
            fit = analysis.calibrate_on_points(fit, env.side(args.side), args.side, n_min=args.min_n)
    doc = {k: (jfloat(v) if isinstance(v, float) else v) for k, v in fit.to_dict().items()}
    _emit(_dump_json(doc), args.out)


def _parse_grid(text: str):
    try:
        lo, hi, per = text.split(":")
        return float(lo), float(hi), int(per)
    except ValueError:
        raise UsageError(f"--grid expects LO:HI:PER_DECADE, got {text!r}") from None


def cmd_funceq(args):
    doc = json.loads(_read(args.input))
    if "alpha" in doc:
        f = analysis.FitResult.from_dict(doc)
        domain_hi = args.domain_max
    else:
        env = analysis.Envelope.from_json(json.dumps(doc))
        f = analysis.EnvelopeInterpolant(env.side(args.side))
        domain_hi = None
    if (args.a is None) != (args.b is None):
        raise UsageError("--a and --b go together")
    if args.a is None:
        scales = analysis.DEFAULT_SCALES
        pairs = [(a, b) for i, a in enumerate(scales) for b in scales[i + 1 :]]
    else:
        pairs = [(args.a, args.b)]

    reports = []
    for a, b in pairs:
        if args.grid:
            lo, hi, per = _parse_grid(args.grid)
            xs = analysis.log_grid(lo, hi, per)
        else:
            xs = analysis.default_grid(f, a, b, domain_hi)
        rep = analysis.functional_residual(f, a, b, xs)
        reports.append({k: (jfloat(v) if isinstance(v, float) else v) for k, v in rep.to_dict().items()})
    _emit(_dump_json(reports[0] if len(reports) == 1 else reports), args.out)


# -- parser ---------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--limit", type=_positive, default=None,
                        help="prime table limit (default: smallest that covers the request)")
    common.add_argument("--threads", type=_positive, default=None,
                        help=f"worker count (default: all CPUs, capped by ${THREADS_ENV})")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")

    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("csv", "json"), default=None, help="output format")

    parser = _Parser(prog="goldbach", description="Goldbach partition workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sieve-info", parents=[common], help="build a prime table and report pi(limit)",
                       description=f"Build a prime table (default limit {DEFAULT_LIMIT}) and print "
                                   "the limit, pi(limit) and construction time.")
    p.set_defaults(func=cmd_sieve_info)

    p = sub.add_parser("count", parents=[common], help="print 'n G(n)'",
                       description="Exact number of prime pairs p <= q with p + q = n.")
    p.add_argument("--n", type=int, required=True, help="even integer >= 4")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("witness", parents=[common], help="print 'n p q' with the smallest p",
                       description="Smallest-p Goldbach partition of n. Exit 3 if none exists.")
    p.add_argument("--n", type=int, required=True, help="even integer >= 4")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("scan", parents=[common, fmt], help="G(n) for every even n in a range",
                       description="Exact G(n) for all even n in [start, end]. CSV header 'n,G'. "
                                   "Exit 3 if any G(n) is 0.")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("estimate", parents=[common, fmt], help="all estimator values for one n",
                       description="Log sums, singular series, li2 integral and Hardy-Littlewood "
                                   "estimate for one even n >= 6 (default format json).")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prime-limit", type=_positive, default=estimators.DEFAULT_PRIME_LIMIT,
                   help="primes used for the Hardy-Littlewood constant")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("check-strong", parents=[common, fmt], help="test G(n) > s0 - s1 - s2 over a range",
                       description="Strong-form inequality with both big-O constants set to 1. "
                                   "CSV columns n,G,s0,s1,s2,margin,pass.")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.set_defaults(func=cmd_check_strong)

    p = sub.add_parser("check-chebyshev", parents=[common, fmt], help="measure pi(n) ln n / n against (7/8, 9/8)",
                       description="Min/max of pi(n) ln(n)/n over [start, end] followed by every n "
                                   "outside the open interval (7/8, 9/8).")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--end", type=int, required=True)
    p.set_defaults(func=cmd_check_chebyshev)

    p = sub.add_parser("constant", parents=[common], help="Hardy-Littlewood partial product",
                       description="Product of p(p-2)/(p-1)^2 over odd primes p <= prime-limit, "
                                   "printed to 12 significant digits.")
    p.add_argument("--prime-limit", type=_positive, default=estimators.DEFAULT_PRIME_LIMIT)
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("envelope", parents=[common], help="lower/upper records of a scan",
                       description="Read a scan (CSV or JSON) and write its strict lower/upper "
                                   "record points as JSON.")
    p.add_argument("--in", dest="input", required=True, help="scan file")
    p.set_defaults(func=cmd_envelope)

    p = sub.add_parser("fit", parents=[common], help="fit exp(alpha n^beta) to an envelope side",
                       description="Damped Gauss-Newton fit of ln G = alpha n^beta to record points.")
    p.add_argument("--in", dest="input", required=True, help="envelope JSON")
    p.add_argument("--side", choices=("lower", "upper"), required=True)
    p.add_argument("--min-n", type=int, default=analysis.DEFAULT_N_MIN,
                   help="ignore records below this n; also the calibration start")
    p.add_argument("--min-g", type=int, default=2, help="ignore records with G below this")
    p.add_argument("--calibrate", action="store_true",
                   help="rescale alpha so the curve bounds the data for n >= min-n")
    p.add_argument("--series", default=None,
                   help="scan file to calibrate against (default: the record points)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("funceq", parents=[common], help="residuals of f(ax)/f(a) = f(bx)/f(b)",
                       description="Measure the scaling relation on a fit JSON or an envelope "
                                   "interpolant. Without --a/--b every pair from 10, 100, 1000 is used.")
    p.add_argument("--in", dest="input", required=True, help="envelope or fit JSON")
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--grid", default=None, help="x grid as LO:HI:PER_DECADE (log spaced)")
    p.add_argument("--side", choices=("lower", "upper"), default="lower",
                   help="envelope side (envelope input only)")
    p.add_argument("--domain-max", type=float, default=1e6,
                   help="upper end of the default x grid for fit input")
    p.set_defaults(func=cmd_funceq)
    return parser


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.threads = resolve_threads(args.threads)
        args.func(args)
    except SystemExit as exc:  # --help
        return exc.code or 0
    except CounterexampleFound as exc:
        print(f"error:{exc.category}: GOLDBACH COUNTEREXAMPLE: {exc}", file=sys.stderr)
        return EXIT_COUNTEREXAMPLE
    except CapacityError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except GoldbachError as exc:
        print(f"error:{exc.category}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as exc:
        print(f"error:usage: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
