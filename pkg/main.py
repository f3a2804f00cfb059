"""
@file main.py
@brief `fairdiv` entry point. Sub-commands:
       1) gen            - build an instance (agreement, random, lower-bound families)
       2) run            - run a rule and report the allocation with its checks
       3) check          - check a given allocation against required properties
       4) sweep          - empirical distortion / EF1 pass rate over an (n, m, k) grid
       5) verify-lemmas  - exact check of the deadline inequalities
       Exit codes: 0 success, 1 property violation, 2 usage or input error.
"""

from __future__ import annotations
import argparse
import json
import sys
from typing import List, Optional

from analyzers.base_analyzer import BaseAnalyzer, CapConfig
from analyzers.check_analyzer import CheckAnalyzer, PROPERTY_NAMES
from analyzers.gen_analyzer import GenAnalyzer
from analyzers.lemma_analyzer import LemmaAnalyzer
from analyzers.run_analyzer import RunAnalyzer
from analyzers.sweep_analyzer import SweepAnalyzer

from config.enums import RULE_ORDER, UNIFORM_PREFIX, Caps, Defaults, Generator, OutputFormat
from config.messages import LogMsg
from fairdiv.errors import FairDivError
from utilits.logger import analysis_logger
from utilits.serialization import parse_rational, write_text

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """@brief argparse failure turned into an exception so main() can return 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _print_section(title: str, body: str) -> None:
    """
    @brief Prints a titled section.
    @param title Section title
    @param body Pre-formatted string
    """
    print("\n" + title)
    print("-" * 70)
    print(body)


def _rule_id(text: str) -> str:
    base = text[len(UNIFORM_PREFIX):] if text.startswith(UNIFORM_PREFIX) else text
    if base not in RULE_ORDER:
        raise argparse.ArgumentTypeError(f"unknown rule {text!r}; expected one of {', '.join(RULE_ORDER)}")
    return text


def _csv_list(text: str) -> List[str]:
    return [part.strip() for part in text.split(",") if part.strip()]


def _add_caps(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mms-max-m", type=int, default=Caps.MMS_MAX_M, help="MMS oracle: max goods")
    p.add_argument("--mms-max-n", type=int, default=Caps.MMS_MAX_N, help="MMS oracle: max agents")
    p.add_argument("--perm-max-n", type=int, default=Caps.PERMUTATION_MAX_N,
                   help="exact expansion of uniform:<rule> up to this n")
    p.add_argument("--vertex-cap", type=int, default=Caps.VERTEX_PRODUCT_MAX,
                   help="max joint vertex profiles for exhaustive distortion search")


def _add_output(p: argparse.ArgumentParser, default: OutputFormat = OutputFormat.JSON) -> None:
    p.add_argument("--out", default=None, help="write machine-readable output here")
    p.add_argument("--format", type=OutputFormat, choices=list(OutputFormat), default=default,
                   help="output format (json|csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fairdiv", description="Fair division from top-k rankings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="generate an instance")
    gen.add_argument("--generator", type=Generator, choices=list(Generator), default=Generator.IDENTICAL)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--m", type=int, default=None)
    gen.add_argument("--k", type=int, default=None)
    gen.add_argument("--x", type=int, default=2, help="base of the nested-types family (m = x^n)")
    gen.add_argument("--seed", type=int, default=Defaults.SEED)
    gen.add_argument("--goods-cap", type=int, default=Caps.THM1_MAX_GOODS)
    _add_output(gen)

    run = sub.add_parser("run", help="run a rule")
    run.add_argument("--rule", type=_rule_id, required=True)
    run.add_argument("--instance", default=None, help="instance JSON; otherwise built from --generator")
    run.add_argument("--generator", type=Generator, choices=[Generator.IDENTICAL, Generator.RANDOM],
                     default=Generator.IDENTICAL)
    run.add_argument("--n", type=int, default=None)
    run.add_argument("--m", type=int, default=None)
    run.add_argument("--k", type=int, default=None)
    run.add_argument("--seed", type=int, default=Defaults.SEED)
    _add_caps(run)
    _add_output(run)

    check = sub.add_parser("check", help="check an allocation")
    check.add_argument("--instance", required=True)
    check.add_argument("--allocation", required=True)
    check.add_argument("--require", type=_csv_list, default=["ef1"],
                       help=f"comma-separated properties out of {', '.join(PROPERTY_NAMES)}")
    check.add_argument("--alpha", type=parse_rational, default=parse_rational("1"),
                       help="MMS fraction for the mms property, as num/den")
    _add_caps(check)
    _add_output(check)

    sweep = sub.add_parser("sweep", help="distortion and fairness over a grid")
    sweep.add_argument("--rule", type=_csv_list, default=list(RULE_ORDER),
                       help="comma-separated rule ids (default: all deterministic rules)")
    sweep.add_argument("--n-min", type=int, default=2)
    sweep.add_argument("--n", type=int, default=3, help="largest n")
    sweep.add_argument("--m", type=int, default=4, help="largest m")
    sweep.add_argument("--instances", type=int, default=1, help="random instances per (n, m, k)")
    sweep.add_argument("--seed", type=int, default=Defaults.SEED)
    sweep.add_argument("--samples", type=int, default=Defaults.SAMPLES)
    sweep.add_argument("--workers", type=int, default=1)
    sweep.add_argument("--pdf", default=None, help="optional PDF summary path")
    _add_caps(sweep)
    _add_output(sweep, OutputFormat.CSV)

    lem = sub.add_parser("verify-lemmas", help="verify the deadline inequalities")
    lem.add_argument("--n", type=int, default=50, help="largest n")
    lem.add_argument("--d", type=int, default=5000, help="largest d")
    lem.add_argument("--pdf", default=None, help="optional PDF summary path")
    _add_output(lem)
    return parser


def _caps(args: argparse.Namespace) -> CapConfig:
    return CapConfig(args.mms_max_m, args.mms_max_n, args.perm_max_n, args.vertex_cap)


def _make_analyzer(args: argparse.Namespace) -> BaseAnalyzer:
    if args.command == "gen":
        return GenAnalyzer(args.generator, args.n, args.m, args.k, args.x, args.seed, args.goods_cap)
    if args.command == "run":
        if args.instance is not None:
            return RunAnalyzer(args.rule, instance_path=args.instance, caps=_caps(args), seed=args.seed)
        if args.n is None:
            raise UsageError("run needs --instance or --n/--m/--k")
        built = GenAnalyzer(args.generator, args.n, args.m, args.k, seed=args.seed).execute_analysis()
        return RunAnalyzer(args.rule, instance=built["instance"], valuations=built["valuations"],
                           caps=_caps(args), seed=args.seed)
    if args.command == "check":
        return CheckAnalyzer(args.instance, args.allocation, args.require, args.alpha, _caps(args))
    if args.command == "sweep":
        for rule in args.rule:
            _rule_id(rule)
        return SweepAnalyzer(args.rule, args.n_min, args.n, args.m, args.instances,
                             args.seed, args.samples, args.workers, _caps(args))
    return LemmaAnalyzer(args.n, args.d)


def main(argv: Optional[List[str]] = None) -> int:
    """
    @brief Parse arguments, run one command and print its report.
    @return Exit code (0 success, 1 violation, 2 error)
    """
    logger = analysis_logger.get_logger("Main")
    try:
        args = build_parser().parse_args(argv)
        logger.info(LogMsg.COMMAND_START.format(args.command))
        analyzer = _make_analyzer(args)
        result = analyzer.execute_analysis()
    except UsageError as error:
        print(f"fairdiv: usage error: {error}", file=sys.stderr)
        return EXIT_USAGE
    except argparse.ArgumentTypeError as error:
        print(f"fairdiv: {error}", file=sys.stderr)
        return EXIT_USAGE
    except (FairDivError, OSError, json.JSONDecodeError) as error:
        logger.error(str(error))
        print(f"fairdiv: {error}", file=sys.stderr)
        return EXIT_USAGE

    try:
        text = analyzer.render(result, args.format)
        if args.out:
            write_text(text, args.out)
            logger.info(LogMsg.OUTPUT_WRITTEN.format(args.out))
            _print_section(result.get("title", args.command), analyzer.print(result))
        else:
            sys.stdout.write(text)
        pdf_path = getattr(args, "pdf", None)
        if pdf_path:
            analyzer.write_pdf(result, pdf_path)
    except OSError as error:
        logger.error(str(error))
        print(f"fairdiv: {error}", file=sys.stderr)
        return EXIT_USAGE

    code = EXIT_VIOLATION if analyzer.violation(result) else EXIT_OK
    logger.info(LogMsg.COMMAND_DONE.format(args.command, code))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
