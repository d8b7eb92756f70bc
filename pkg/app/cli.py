"""
Command-line surface.

    compile --method exact|evidence|default|lifted [-k N] MLNFILE
    query-map MLNFILE --evidence FILE --query FORMULA
    query-poss THEORYFILE --evidence FILE --query FORMULA
    verify --suite prop1|ranking|equivalence|lifted [--seed N]
    partition MLNFILE

Exit status: 0 success or entailed, 1 not entailed or failed verification,
2 usage or input error, 3 evidence inconsistent with the hard rules.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from app.core.constants import (
    BlockingMode,
    ExitCode,
    RedundancyFilter,
    TransformMethod,
    VerifySuite,
)
from app.core.exceptions import ReasoningException, ValidationException
from app.core.logging import setup_logging
from app.formats import (
    parse_evidence,
    parse_evidence_family,
    parse_formula,
    parse_mln,
    parse_theory,
    render_partition,
    render_report,
    render_theory,
    vocabulary_of,
)
from app.models.mln import EMPTY_EVIDENCE
from app.services.reasoning_service import ReasoningService
from app.services.verification_service import run_suite

# Set up module logger
logger = logging.getLogger(__name__)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationException(f"Cannot read {path}: {exc.strerror}", details={"path": path})


def _load_mln(path: str):
    return parse_mln(_read(path), name=Path(path).stem)


def _exit_for(entailed: bool) -> int:
    return ExitCode.SUCCESS if entailed else ExitCode.NOT_ENTAILED


def cmd_compile(args: argparse.Namespace, service: ReasoningService) -> int:
    mln = _load_mln(args.mlnfile)
    family = None
    if args.evidence_family:
        family = parse_evidence_family(_read(args.evidence_family), vocabulary_of(mln))
    theory = service.compile(
        mln,
        args.method,
        k=args.k,
        evidence_family=family,
        blocking=args.blocking,
        redundancy_filter=args.filter,
        domain_size=args.domain_size,
        pruning=not args.no_pruning,
        omit_entailed_blocking=args.omit_entailed_blocking,
    )
    sys.stdout.write(render_theory(theory, numeric=args.numeric))
    return ExitCode.SUCCESS


def cmd_query_map(args: argparse.Namespace, service: ReasoningService) -> int:
    mln = _load_mln(args.mlnfile)
    vocabulary = vocabulary_of(mln)
    evidence = parse_evidence(_read(args.evidence), vocabulary) if args.evidence else EMPTY_EVIDENCE
    query = parse_formula(args.query, vocabulary)
    entailed, penalty = service.query_map(mln, evidence, query)
    sys.stdout.write(f"entailed: {str(entailed).lower()}\npenalty: {penalty}\n")
    return _exit_for(entailed)


def cmd_query_poss(args: argparse.Namespace, service: ReasoningService) -> int:
    theory = parse_theory(_read(args.theoryfile))
    vocabulary = vocabulary_of(theory)
    evidence = parse_evidence(_read(args.evidence), vocabulary) if args.evidence else EMPTY_EVIDENCE
    query = parse_formula(args.query, vocabulary)
    entailed, level = service.query_poss(theory, evidence, query)
    sys.stdout.write(f"entailed: {str(entailed).lower()}\nconsistency level: {level.label()}\n")
    return _exit_for(entailed)


def cmd_verify(args: argparse.Namespace, service: ReasoningService) -> int:
    report = run_suite(args.suite, seed=args.seed, count=args.count, k=args.k)
    sys.stdout.write(render_report(report))
    return ExitCode.SUCCESS if report.passed else ExitCode.NOT_ENTAILED


def cmd_partition(args: argparse.Namespace, service: ReasoningService) -> int:
    partition = service.partition(_load_mln(args.mlnfile), domain_size=args.domain_size)
    sys.stdout.write(render_partition(partition))
    return ExitCode.SUCCESS


def argparser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mln2poss",
        description="Compile Markov logic networks into possibilistic logic theories",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-level", default=None, help="overrides LOG_LEVEL")
    commands = parser.add_subparsers(dest="command", required=True)

    compile_parser = commands.add_parser("compile", help="compile an MLN into a theory")
    compile_parser.add_argument("mlnfile")
    compile_parser.add_argument(
        "--method", type=TransformMethod, choices=list(TransformMethod), required=True
    )
    compile_parser.add_argument("-k", type=int, default=None, help="largest evidence set size")
    compile_parser.add_argument("--evidence-family", default=None)
    compile_parser.add_argument(
        "--blocking", type=BlockingMode, choices=list(BlockingMode), default=BlockingMode.FULL
    )
    compile_parser.add_argument(
        "--filter",
        type=RedundancyFilter,
        choices=list(RedundancyFilter),
        default=RedundancyFilter.NONE,
    )
    compile_parser.add_argument("--numeric", action="store_true", default=False)
    compile_parser.add_argument("--domain-size", type=int, default=None)
    compile_parser.add_argument("--no-pruning", action="store_true", default=False)
    compile_parser.add_argument("--omit-entailed-blocking", action="store_true", default=False)
    compile_parser.set_defaults(handler=cmd_compile)

    map_parser = commands.add_parser("query-map", help="MAP entailment on an MLN")
    map_parser.add_argument("mlnfile")
    map_parser.add_argument("--evidence", default=None)
    map_parser.add_argument("--query", required=True)
    map_parser.set_defaults(handler=cmd_query_map)

    poss_parser = commands.add_parser("query-poss", help="possibilistic entailment on a theory")
    poss_parser.add_argument("theoryfile")
    poss_parser.add_argument("--evidence", default=None)
    poss_parser.add_argument("--query", required=True)
    poss_parser.set_defaults(handler=cmd_query_poss)

    verify_parser = commands.add_parser("verify", help="run a verification suite")
    verify_parser.add_argument(
        "--suite", type=VerifySuite, choices=list(VerifySuite), required=True
    )
    verify_parser.add_argument("--seed", type=int, default=0)
    verify_parser.add_argument("--count", type=int, default=None, help="random MLNs in the corpus")
    verify_parser.add_argument("-k", type=int, default=None)
    verify_parser.set_defaults(handler=cmd_verify)

    partition_parser = commands.add_parser("partition", help="list interchangeable constants")
    partition_parser.add_argument("mlnfile")
    partition_parser.add_argument("--domain-size", type=int, default=None)
    partition_parser.set_defaults(handler=cmd_partition)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = argparser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help and 2 for usage errors
        return int(exc.code or 0)

    if args.log_level:
        setup_logging(args.log_level)

    try:
        return int(args.handler(args, ReasoningService()))
    except ReasoningException as exc:
        logger.debug(f"{exc.code}: {exc.message}", extra={"details": exc.details})
        sys.stderr.write(f"error: {exc.message}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
