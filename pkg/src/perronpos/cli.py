"""Command line entry point: ``perronpos analyze`` and ``perronpos coxeter``."""

from __future__ import annotations

import argparse
import sys

from . import matrix as mx
from .coxeter import SanityGateError, analyze_element, parse_word
from .criterion import AnalysisConfig, RowSumsNotOne, analyze, stochastic_check
from .fileio import EXIT_INPUT_ERROR, InputError, exit_code, load_datum, load_matrix, render_report

_TOLERANCE_FLAGS = ("tol", "tol_orth", "tol_zero", "eps_pos")


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"{text} is not a positive number")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text} is not a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=None,
                        help="power iteration residual tolerance (default 1e-12)")
    common.add_argument("--tol-orth", type=_positive_float, default=None,
                        help="|u v| below this counts as orthogonal (default 1e-9)")
    common.add_argument("--tol-zero", type=_positive_float, default=None,
                        help="|v_i| below this counts as zero (default 1e-9)")
    common.add_argument("--eps-pos", type=_positive_float, default=None,
                        help="relative positivity threshold for float powers (default 1e-12)")
    common.add_argument("--k-max", type=_positive_int, default=256,
                        help="largest power of Z to examine (default 256)")
    common.add_argument("--max-iter", type=_positive_int, default=100_000,
                        help="power iteration budget (default 100000)")
    common.add_argument("--seed", type=int, default=0, help="seed for random restarts")
    common.add_argument("--mode", choices=("exact", "float"), default=None,
                        help="arithmetic regime (default: the file's own)")
    common.add_argument("--output", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(
        prog="perronpos",
        description="Decide whether the spectral radius of a real matrix is a simple, "
                    "dominant eigenvalue.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="analyse a matrix file")
    p.add_argument("path", help="JSON matrix file")
    p.add_argument("--row-stochastic", action="store_true",
                   help="use v = 1/n and lambda = 1 (rows must sum to 1)")

    c = sub.add_parser("coxeter", parents=[common],
                       help="analyse a Coxeter group element in the geometric representation")
    c.add_argument("datum", help="JSON Coxeter datum file")
    c.add_argument("word", help='word such as "1,2,3,2" or "s1 s2 s3 s2"')
    return parser


def config_from_args(args: argparse.Namespace) -> AnalysisConfig:
    cfg = AnalysisConfig(k_max=args.k_max, max_iter=args.max_iter, seed=args.seed)
    for name in _TOLERANCE_FLAGS:
        value = getattr(args, name)
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def _warn_ignored(args, exact: bool) -> None:
    if exact and args.eps_pos is not None:
        print("warning: --eps-pos is ignored in exact mode", file=sys.stderr)


def cmd_analyze(args: argparse.Namespace) -> tuple[int, str]:
    cfg = config_from_args(args)
    mf = load_matrix(args.path, args.mode, tol=cfg.eigendata_tol)
    _warn_ignored(args, mf.mode == "exact")
    if args.row_stochastic:
        try:
            verdict = stochastic_check(mf.a, cfg.k_max, cfg.eps_pos)
        except RowSumsNotOne as exc:
            raise InputError(str(exc)) from exc
    else:
        verdict = analyze(mf.a, cfg, eigendata=mf.eigendata)
    return exit_code(verdict.kind), render_report(verdict, args.output)


def cmd_coxeter(args: argparse.Namespace) -> tuple[int, str]:
    cfg = config_from_args(args)
    datum = load_datum(args.datum)
    try:
        word = parse_word(args.word, datum.n)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    if args.mode == "exact" and not datum.exact:
        raise InputError("this datum has irrational form entries; use --mode float")
    exact = datum.exact if args.mode is None else args.mode == "exact"
    _warn_ignored(args, exact)
    report = analyze_element(datum, word, cfg, exact=exact)
    return exit_code(report.verdict.kind), render_report(report, args.output)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = cmd_analyze if args.command == "analyze" else cmd_coxeter
    try:
        code, text = handler(args)
    except (InputError, mx.DimensionError, SanityGateError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
