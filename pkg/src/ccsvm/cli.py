"""Command-line front end: ``ccsvm <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .detector import detect_cc, parse_report
from .errors import EXIT_CODES, CCError, ConfigError
from .evalkit import format_metrics, summarize
from .sbfl import FORMULAS, Ranking, rank
from .seqkernel import build_gram
from .svm import SvmConfig
from .synth import SynthConfig, generate
from .traces import flip_outcomes, parse_suite, serialize_suite

EXIT_USAGE = 2
EXIT_IO = 14


def _epilog() -> str:
    codes = [("usage error", EXIT_USAGE)] + sorted(EXIT_CODES.items(), key=lambda kv: kv[1])
    codes.append(("I/O error", EXIT_IO))
    return "exit codes:\n" + "\n".join(f"  {code:>3}  {name}" for name, code in codes)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _svm_config(args) -> SvmConfig:
    return SvmConfig(c=args.c, kkt_tolerance=args.kkt_tol)


def cmd_gram(args) -> None:
    suite = parse_suite(_read(args.input))
    _write(args.out, build_gram(suite).to_csv())


def cmd_detect(args) -> None:
    suite = parse_suite(_read(args.input))
    report = detect_cc(suite, _svm_config(args))
    _write(args.out, report.to_text())
    if args.flipped:
        _write(args.flipped, serialize_suite(report.flipped_suite))
    if args.model and report.model is not None:
        _write(args.model, report.model.to_text())


def cmd_rank(args) -> None:
    suite = parse_suite(_read(args.input))
    _write(args.out, rank(suite, args.formula).to_csv())


def cmd_eval(args) -> None:
    suite = parse_suite(_read(args.input))
    before = Ranking.from_csv(_read(args.before), args.formula)
    after = Ranking.from_csv(_read(args.after), args.formula)
    detected = parse_report(_read(args.detected)) if args.detected else None
    metrics = summarize(
        before,
        after,
        faulty=suite.faulty_predicates,
        detected=detected,
        truth=suite.ground_truth_cc,
        n_statements=args.n_statements,
    )
    _write(args.out, format_metrics(metrics, args.report))


def cmd_synth(args) -> None:
    config = SynthConfig(
        n_predicates=args.n_predicates,
        n_tests=args.n_tests,
        fail_rate=args.fail_rate,
        cc_rate=args.cc_rate,
        trace_len_range=(args.min_len, args.max_len),
        noise=args.noise,
        seed=args.seed,
    )
    _write(args.out, serialize_suite(generate(config), comments=config.describe()))


def cmd_pipeline(args) -> None:
    suite = parse_suite(_read(args.input))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    report = detect_cc(suite, _svm_config(args))
    (out / "cc_report.txt").write_text(report.to_text(), encoding="utf-8")
    if report.gram is not None:
        (out / "gram.csv").write_text(report.gram.to_csv(), encoding="utf-8")
    if report.model is not None:
        (out / "model.txt").write_text(report.model.to_text(), encoding="utf-8")

    if args.oracle_cc:
        if suite.ground_truth_cc is None:
            raise ConfigError("--oracle-cc needs a #cc section in the input")
        flip_ids = suite.ground_truth_cc
    else:
        flip_ids = report.cc_ids
    flipped = flip_outcomes(suite, flip_ids)
    (out / "flipped.trace").write_text(serialize_suite(flipped), encoding="utf-8")

    before = rank(suite, args.formula)
    after = rank(flipped, args.formula)
    (out / "ranking_before.csv").write_text(before.to_csv(), encoding="utf-8")
    (out / "ranking_after.csv").write_text(after.to_csv(), encoding="utf-8")

    metrics = summarize(
        before,
        after,
        faulty=suite.faulty_predicates,
        detected=report.cc_ids,
        truth=suite.ground_truth_cc,
        n_statements=args.n_statements,
    )
    metrics["flipped"] = len(flip_ids)
    metrics["flip_source"] = "oracle" if args.oracle_cc else "detected"
    (out / "metrics.txt").write_text(format_metrics(metrics, "text"), encoding="utf-8")
    (out / "metrics.csv").write_text(format_metrics(metrics, "csv"), encoding="utf-8")
    sys.stdout.write(format_metrics(metrics, args.report))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccsvm",
        description="Detect coincidentally correct tests with a sequence-kernel SVM "
        "and re-rank predicates with spectrum-based fault localization.",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help):
        p = sub.add_parser(
            name,
            help=help,
            description=help,
            epilog=_epilog(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.set_defaults(func=func)
        return p

    def io_flags(p, out_default="-"):
        p.add_argument("--in", dest="input", default="-", help="trace file ('-' = stdin)")
        p.add_argument("--out", default=out_default, help="output path ('-' = stdout)")

    def svm_flags(p):
        p.add_argument("--c", type=float, default=SvmConfig.c, help="box bound scale")
        p.add_argument("--kkt-tol", type=float, default=SvmConfig.kkt_tolerance)

    def formula_flag(p):
        p.add_argument("--formula", choices=FORMULAS, default="ochiai")

    p = add("gram", cmd_gram, "write the pairwise similarity matrix as CSV")
    io_flags(p)

    p = add("detect-cc", cmd_detect, "classify passing tests as true passes or CC")
    io_flags(p)
    svm_flags(p)
    p.add_argument("--flipped", help="also write the flipped suite here")
    p.add_argument("--model", help="also write the trained model here")

    p = add("rank", cmd_rank, "rank predicates by suspiciousness (CSV)")
    io_flags(p)
    formula_flag(p)

    p = add("eval", cmd_eval, "compare before/after rankings against ground truth")
    io_flags(p)
    formula_flag(p)
    p.add_argument("--before", required=True, help="ranking CSV before CC handling")
    p.add_argument("--after", required=True, help="ranking CSV after CC handling")
    p.add_argument("--detected", help="CC report from detect-cc (for precision/recall)")
    p.add_argument("--n-statements", type=int, help="denominator of the EXAM score")
    p.add_argument("--report", choices=("text", "csv"), default="text")

    p = add("synth", cmd_synth, "generate a synthetic suite with known CC tests")
    p.add_argument("--out", default="-")
    defaults = SynthConfig()
    p.add_argument("--n-predicates", type=int, default=defaults.n_predicates)
    p.add_argument("--n-tests", type=int, default=defaults.n_tests)
    p.add_argument("--fail-rate", type=float, default=defaults.fail_rate)
    p.add_argument("--cc-rate", type=float, default=defaults.cc_rate)
    p.add_argument("--noise", type=float, default=defaults.noise)
    p.add_argument("--min-len", type=int, default=defaults.trace_len_range[0])
    p.add_argument("--max-len", type=int, default=defaults.trace_len_range[1])
    p.add_argument("--seed", type=int, default=defaults.seed)

    p = add("pipeline", cmd_pipeline, "detect CC, flip, rank before/after and evaluate")
    p.add_argument("--in", dest="input", default="-", help="trace file ('-' = stdin)")
    p.add_argument("--out", required=True, help="directory for all artifacts")
    formula_flag(p)
    svm_flags(p)
    p.add_argument("--report", choices=("text", "csv"), default="text")
    p.add_argument("--n-statements", type=int, help="denominator of the EXAM score")
    p.add_argument(
        "--oracle-cc",
        action="store_true",
        help="flip the #cc ground truth instead of the detected set",
    )
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except CCError as exc:
        print(f"ccsvm: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"ccsvm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ccsvm: error: {exc}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
