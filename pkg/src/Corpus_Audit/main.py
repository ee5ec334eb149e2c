"""Command-line entry point: ingest, analyze and report."""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import NoReturn

from Corpus_Audit import __version__
from Corpus_Audit.corpus.corpus_model import Corpus, FormatTag, IngestOptions, SourceLanguage, ingest_corpus, load_ingest_options
from Corpus_Audit.errors import AuditError, IngestError, UsageError
from Corpus_Audit.features.catalog import load_catalog
from Corpus_Audit.features.detectors import histogram_of, profiles_frame
from Corpus_Audit.metrics.metrics import CountMode, count_symbols, load_symbol_spec
from Corpus_Audit.report.audit_report import build_report, diff, load_report_config
from Corpus_Audit.report.pipeline import profile_examples
from Corpus_Audit.report.render import RenderFormat, parse_report, render, render_details, render_diff, render_table, render_tiers
from Corpus_Audit.utils import save_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_STRICT = 3

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser that raises instead of exiting, so :func:`run` owns exit codes."""

    def error(self, message: str) -> NoReturn:
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        msg = f"expected an integer, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from None
    if value < 1:
        msg = f"expected a positive integer, got {value}"
        raise argparse.ArgumentTypeError(msg)
    return value


def _non_negative(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        msg = f"expected an integer, got {text!r}"
        raise argparse.ArgumentTypeError(msg) from None
    if value < 0:
        msg = f"expected a non-negative integer, got {value}"
        raise argparse.ArgumentTypeError(msg)
    return value


def build_parser() -> argparse.ArgumentParser:
    """Build the ``corpus-audit`` argument parser."""
    common = _ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Output file (default: standard output)")
    common.add_argument("--render", choices=[fmt.value for fmt in RenderFormat], default=RenderFormat.JSON.value, help="Output format")
    common.add_argument("--report-config", type=Path, help="Report config YAML (absence flags, decimals)")
    common.add_argument("--strict", action="store_true", help="Exit 3 on absence-flag violations or diagnostics")
    common.add_argument("--log-file", type=Path, help="Also write the log to this file")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    corpus = _ArgumentParser(add_help=False)
    corpus.add_argument("inputs", nargs="+", type=Path, help="Dataset files; several files are concatenated in order")
    corpus.add_argument("--lang", required=True, help="Language of the inputs: java, cpp or python")
    corpus.add_argument("--format", choices=[tag.value for tag in FormatTag], help="Input layout (default: tokenized-lines)")
    corpus.add_argument("--title-separator", help="Separator between a title and the code on each line")
    corpus.add_argument("--corpus-config", type=Path, help="Corpus config YAML (markers, encoding)")
    corpus.add_argument("--symbols", type=Path, help="Symbol spec YAML (default: the bundled Java test set rows)")
    corpus.add_argument("--catalog", type=Path, help="Elementary catalog YAML")
    corpus.add_argument("--first", type=_non_negative, help="Only analyze the first N examples")
    corpus.add_argument("--jobs", type=_positive, default=1, help="Worker processes (default: 1)")
    corpus.add_argument("--raw-substring", action="store_true", help="Count by substring search instead of tokens")

    parser = _ArgumentParser(prog="corpus-audit", description="Audit which language features a program-translation test set exercises")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    audit = commands.add_parser("audit", parents=[corpus, common], help="Full audit report")
    audit.add_argument("--compare-reference", action="store_true", help="Record the fit against the reference counts in the symbol spec")
    commands.add_parser("count", parents=[corpus, common], help="Symbol occurrence table only")
    classify = commands.add_parser("classify", parents=[corpus, common], help="Tier histogram")
    classify.add_argument("--details", action="store_true", help="Emit one CSV row per example instead of the histogram")
    diff_parser = commands.add_parser("diff", parents=[common], help="Compare two JSON audit reports")
    diff_parser.add_argument("reports", nargs=2, type=Path, metavar="REPORT", help="Left and right report")
    return parser


def configure_logging(verbose: bool = False, log_file: Path | None = None) -> None:
    """Log to stderr (stdout carries the rendered output) and optionally to a file."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT, handlers=handlers, force=True)


def _load_corpus(args: argparse.Namespace) -> Corpus:
    try:
        language = SourceLanguage.parse(args.lang)
    except IngestError as e:
        raise UsageError(str(e)) from e
    options: IngestOptions = load_ingest_options(args.corpus_config)
    ingest_format = options.ingest_format
    if args.format:
        ingest_format = replace(ingest_format, tag=FormatTag(args.format))
    if args.title_separator is not None:
        ingest_format = replace(ingest_format, title_separator=args.title_separator or None)
    options = replace(options, ingest_format=ingest_format)

    corpus = ingest_corpus(args.inputs[0], language, options=options)
    for path in args.inputs[1:]:
        corpus = corpus.concat(ingest_corpus(path, language, options=options))
    return corpus.head(args.first)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        save_text(text, out)
        logger.info("Wrote %s", out)


def _progress() -> bool:
    return sys.stderr.isatty()


def _audit(args: argparse.Namespace, fmt: RenderFormat) -> int:
    corpus = _load_corpus(args)
    report_config = load_report_config(args.report_config)
    report = build_report(
        corpus,
        load_symbol_spec(args.symbols),
        load_catalog(corpus.language, args.catalog),
        mode=CountMode.RAW_SUBSTRING if args.raw_substring else CountMode.TOKEN,
        report_config=report_config,
        jobs=args.jobs,
        progress=_progress(),
        compare_reference=args.compare_reference,
    )
    _emit(render(report, fmt, report_config.decimals), args.out)
    for flag in report.violations:
        logger.warning("Absence violation: %s occurs %s times", flag.symbol, flag.observed_count)
    if args.strict and (report.violations or report.diagnostics):
        return EXIT_STRICT
    return EXIT_OK


def _count(args: argparse.Namespace, fmt: RenderFormat) -> int:
    corpus = _load_corpus(args)
    spec = load_symbol_spec(args.symbols)
    table = count_symbols(corpus, spec, CountMode.RAW_SUBSTRING if args.raw_substring else CountMode.TOKEN)
    _emit(render_table(table, fmt, spec.to_dict()), args.out)
    if args.strict and (table.diagnostics or corpus.diagnostics):
        return EXIT_STRICT
    return EXIT_OK


def _classify(args: argparse.Namespace, fmt: RenderFormat) -> int:
    corpus = _load_corpus(args)
    profiles = profile_examples(corpus, load_catalog(corpus.language, args.catalog), args.jobs, _progress())
    if args.details:
        _emit(render_details(profiles_frame(profiles)), args.out)
    else:
        _emit(render_tiers(corpus.corpus_id, histogram_of(profiles), args.first, fmt), args.out)
    if args.strict and (corpus.diagnostics or any(profile.diagnostics for profile in profiles)):
        return EXIT_STRICT
    return EXIT_OK


def _diff(args: argparse.Namespace, fmt: RenderFormat) -> int:
    left, right = (parse_report(path.read_text(encoding="utf-8")) for path in args.reports)
    report_config = load_report_config(args.report_config)
    _emit(render_diff(diff(left, right), fmt, report_config.decimals), args.out)
    return EXIT_OK


COMMANDS = {"audit": _audit, "count": _count, "classify": _classify, "diff": _diff}


def _fail(error: str, code: str, status: int) -> int:
    sys.stderr.write(f"ERROR {code}: {error}\n")
    return status


def run(argv: list[str] | None = None) -> int:
    """
    Run one command and return its exit status.

    Returns
    -------
        int: 0 on success, 1 on usage errors, 2 on input, config or diff
        errors, 3 when ``--strict`` finds violations or diagnostics.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        return _fail(str(e), e.code, EXIT_USAGE)
    except SystemExit as e:  # --help and --version
        return int(e.code or 0)

    configure_logging(args.verbose, args.log_file)
    try:
        return COMMANDS[args.command](args, RenderFormat(args.render))
    except UsageError as e:
        return _fail(str(e), e.code, EXIT_USAGE)
    except AuditError as e:
        logger.debug("Command failed", exc_info=True)
        return _fail(str(e), e.code, EXIT_INPUT)
    except OSError as e:
        return _fail(f"{e.filename or ''}: {e.strerror}", "IO", EXIT_INPUT)


def main() -> None:
    """Console-script entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
