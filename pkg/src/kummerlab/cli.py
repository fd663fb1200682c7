"""Command line: ``kummerlab verify <suite>``, ``kummerlab fit-dictionary``, ``kummerlab report --all``."""

from __future__ import annotations

import argparse
import sys

from .report import (
    SUITES,
    Config,
    UnknownSuite,
    UnsupportedPrime,
    default_threads,
    emit_report,
    run_suite,
    select,
)


def _primes(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad prime list {text!r}") from None


def _cd(text: str) -> tuple:
    try:
        c, d = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected C:D, got {text!r}") from None
    return c, d


def _common(p: argparse.ArgumentParser):
    p.add_argument("--prime", type=int, default=11, help="prime for single-prime checks (default 11)")
    p.add_argument("--primes", type=_primes, default=(7, 11, 13), help="comma list (default 7,11,13)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=None, help="override every sample count")
    p.add_argument("--cd", type=_cd, default=(1, 2), help="desmic parameter C:D (default 1:2)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kummerlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one suite")
    v.add_argument("suite", help=f"one of {', '.join(SUITES + ('all',))}")
    r = sub.add_parser("report", help="run suites and write a combined report")
    r.add_argument("--all", action="store_true", required=True, help="run every suite")
    for p in (v, r):
        _common(p)
        p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
        p.add_argument("--check", metavar="ID", help="keep only this check id")
        p.add_argument("--parallel", action="store_true", help="run suites concurrently")
        p.add_argument("--timings", action="store_true", help="record wall-clock millis")

    f = sub.add_parser("fit-dictionary", help="fit the u -> (A:B:C:D:E) map and print it")
    _common(f)
    f.add_argument("--count", type=int, default=40, help="lines per prime (default 40)")
    f.add_argument("--out", metavar="PATH", help="write the map in text form here")
    return parser


def _config(args) -> Config:
    return Config(primes=args.primes, prime=args.prime, seed=args.seed, samples=args.samples,
                  cd=args.cd, threads=default_threads(), timings=getattr(args, "timings", False))


def _run(args, suite: str) -> int:
    cfg = _config(args)
    records = select(run_suite(suite, cfg, parallel=args.parallel), args.check)
    if args.json:
        path = None if args.json == "-" else args.json
        code = emit_report(records, "json", path, suite=suite, config=cfg)
        if path is not None:
            emit_report(records, "text", None, suite=suite, config=cfg)
        return code
    return emit_report(records, "text", None, suite=suite, config=cfg)


def _fit(args) -> int:
    from .dictionary import FitError, fit_dictionary
    from .report import check_prime

    for p in args.primes:
        check_prime(p)
    try:
        res = fit_dictionary(primes=args.primes, seed=args.seed, count=args.count)
    except FitError as exc:
        print(f"fit failed: {exc}", file=sys.stderr)
        if exc.witness is not None:
            print(f"witness: {exc.witness}", file=sys.stderr)
        return 1
    text = res.dictionary.to_text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    bad = [r.p for r in res.squaring if not r.feasible]
    print(f"# {len(res.survivors)} of {res.candidates} anchored matchings fit the lines;"
          f" related by symmetry: {res.symmetric_survivors}")
    if bad:
        print(f"# squaring route infeasible mod {', '.join(map(str, bad))}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _run(args, args.suite)
        if args.command == "report":
            return _run(args, "all")
        return _fit(args)
    except (UnknownSuite, UnsupportedPrime, KeyError, OSError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"kummerlab: error: {msg}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
