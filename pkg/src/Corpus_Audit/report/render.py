"""Rendering of reports as JSON, CSV and Markdown."""

from __future__ import annotations

import csv
import json
from enum import Enum
from typing import TYPE_CHECKING, Any

import pandas as pd

from Corpus_Audit.errors import ConfigError
from Corpus_Audit.features.detectors import Tier
from Corpus_Audit.features.functions import CallSiteKind
from Corpus_Audit.report.audit_report import AuditReport, DiffReport, report_from_dict
from Corpus_Audit.utils import canonical_json

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from Corpus_Audit.metrics.metrics import OccurrenceTable

PROGRAMS_ROW = "Programs"
NOTES = (
    "Math tiers: any member of a math-library qualifier (e.g. Math.max, Math.floor) or a listed math function counts.",
    "Casting: `( TypeName ) operand` is high confidence for primitive type keywords and low for class names.",
    "Unresolved call sites (unqualified, not defined in the example, not a known library name) are never counted as Library.",
)


class RenderFormat(str, Enum):
    """Output format of rendered reports."""

    JSON = "json"
    CSV = "csv"
    MARKDOWN = "markdown"


def _scalar(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _number(value: float, decimals: int | None) -> str:
    if isinstance(value, int) or decimals is None:
        return _scalar(value)
    return f"{value:.{decimals}f}"


def _to_csv(rows: Iterable[tuple[str, str, Any]], header: Sequence[str] = ("section", "name", "value")) -> str:
    frame = pd.DataFrame([(section, name, _scalar(value)) for section, name, value in rows], columns=list(header), dtype="object")
    return frame.to_csv(index=False, quoting=csv.QUOTE_ALL, lineterminator="\n")


def _cell(text: Any) -> str:
    return str(text).replace("|", "\\|")


def _md_table(headers: Sequence[str], rows: Iterable[Sequence[Any]], align: Sequence[str]) -> list[str]:
    lines = ["| " + " | ".join(headers) + " |", "|" + "|".join("---:" if side == "r" else "---" for side in align) + "|"]
    lines.extend("| " + " | ".join(_cell(cell) for cell in row) + " |" for row in rows)
    return lines


def _occurrence_markdown(counts: Mapping[str, int], example_count: int, columns: Mapping[str, str]) -> list[str]:
    """Two side-by-side columns: punctuation/operators on the left, reserved words on the right."""
    symbols = [(PROGRAMS_ROW, example_count)] + [(name, count) for name, count in counts.items() if columns.get(name, "symbol") != "word"]
    words = [(name, count) for name, count in counts.items() if columns.get(name, "symbol") == "word"]
    rows = []
    for position in range(max(len(symbols), len(words))):
        left = symbols[position] if position < len(symbols) else ("", "")
        right = words[position] if position < len(words) else ("", "")
        rows.append((left[0], left[1], "", right[0], right[1]))
    return _md_table(("Symbol", "Occurrences", "", "Reserved word", "Occurrences"), rows, ("l", "r", "l", "l", "r"))


def _columns(symbol_spec: Mapping[str, Any]) -> dict[str, str]:
    return {entry["name"]: entry.get("column", "symbol") for entry in symbol_spec.get("symbols", [])}


def _report_csv(report: AuditReport) -> str:
    summary = report.to_dict()
    rows: list[tuple[str, str, Any]] = [
        ("summary", "example_count", report.example_count),
        ("summary", "count_mode", report.count_mode.value),
        ("summary", "class_definition_count", report.class_definition_count),
        ("summary", "loc_total", report.loc_stats.total),
        ("summary", "loc_mean", report.loc_stats.mean),
        ("summary", "catalog_fingerprint", report.catalog_fingerprint),
        ("summary", "symbol_spec_fingerprint", report.symbol_spec_fingerprint),
    ]
    rows.extend(("occurrence", name, count) for name, count in report.occurrence_table.counts.items())
    rows.extend(("tier", name, count) for name, count in summary["tier_histogram"].items())
    rows.extend(("call", name, count) for name, count in summary["call_histogram_total"].items())
    rows.extend(("absence", flag.symbol, flag.observed_count) for flag in report.absence_flags)
    return _to_csv(rows)


def _report_markdown(report: AuditReport, decimals: int | None) -> str:
    lines = [f"# Corpus audit: {report.corpus_id}", ""]
    for flag in report.violations:
        where = ", ".join(f"example {index} line {line}" for index, line in report.class_definition_locations) if flag.symbol == "class" else ""
        lines.append(f"> **VIOLATION**: `{flag.symbol}` is expected to be absent but occurs {flag.observed_count} times" + (f" ({where})" if where else ""))
    if report.violations:
        lines.append("")
    lines += [
        f"- Language: {report.language}",
        f"- Examples: {report.example_count}",
        f"- Count mode: {report.count_mode.value}",
        f"- Class definitions: {report.class_definition_count}",
        f"- Symbol spec: `{report.symbol_spec_fingerprint}`",
        f"- Catalog: `{report.catalog_fingerprint}`",
        "",
        "## Occurrences",
        "",
        *_occurrence_markdown(report.occurrence_table.counts, report.example_count, _columns(report.symbol_spec)),
        "",
        "## Lines of code",
        "",
        *_md_table(
            ("Total", "Mean", "Median", "Max"),
            [(report.loc_stats.total, _number(report.loc_stats.mean, decimals), _number(report.loc_stats.median, decimals), report.loc_stats.maximum)],
            ("r", "r", "r", "r"),
        ),
        "",
        "## Tiers",
        "",
        *_md_table(("Tier", "Examples"), [(tier.value, report.tier_histogram.get(tier, 0)) for tier in Tier], ("l", "r")),
        "",
        "## Call sites",
        "",
        *_md_table(("Kind", "Calls"), [(kind.value, report.call_histogram_total.get(kind, 0)) for kind in CallSiteKind], ("l", "r")),
        "",
        "## Absence flags",
        "",
        *_md_table(
            ("Symbol", "Expected absent", "Observed", "Violated"),
            [(flag.symbol, _scalar(flag.expected_absent), flag.observed_count, _scalar(flag.violated)) for flag in report.absence_flags],
            ("l", "l", "r", "l"),
        ),
    ]
    if report.brace_imbalances:
        lines += ["", "## Bracket imbalances", "", *(f"- {note}" for note in report.brace_imbalances)]
    if report.review_items:
        lines += ["", "## User-function calls for review", ""]
        lines += [f"- example {item.example_index} line {item.line}: {item.caller or '?'} calls {item.callee}" for item in report.review_items]
    if report.reference_fit:
        errors = report.reference_fit["max_relative_error"]
        lines += ["", "## Reference fit", ""]
        lines += [f"- {mode}: max relative error {_number(error, 4 if decimals is not None else None)}" for mode, error in sorted(errors.items())]
        lines.append(f"- best mode: {report.reference_fit['best_mode']}")
    lines += ["", "## Notes", "", *(f"- {note}" for note in NOTES)]
    if report.diagnostics:
        lines += ["", f"## Diagnostics ({len(report.diagnostics)})", "", *(f"- {note}" for note in report.diagnostics)]
    return "\n".join(lines) + "\n"


def render(report: AuditReport, fmt: RenderFormat = RenderFormat.JSON, decimals: int | None = 1) -> str:
    """
    Render an audit report.

    Args:
        report (AuditReport): Report to render.
        fmt (RenderFormat): JSON (lossless, sorted keys), CSV (flattened counts) or Markdown.
        decimals (int | None): Decimal places of floats in Markdown.

    Returns
    -------
        str: The rendered text, newline-terminated.
    """
    if fmt is RenderFormat.JSON:
        return canonical_json(report.to_dict())
    if fmt is RenderFormat.CSV:
        return _report_csv(report)
    return _report_markdown(report, decimals)


def parse_report(text: str) -> AuditReport:
    """Inverse of JSON rendering."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        msg = f"report is not valid JSON: {e}"
        raise ConfigError(msg) from e
    if not isinstance(data, dict):
        msg = "report JSON must be an object"
        raise ConfigError(msg)
    return report_from_dict(data)


def render_table(table: OccurrenceTable, fmt: RenderFormat = RenderFormat.JSON, symbol_spec: Mapping[str, Any] | None = None) -> str:
    """Render just an occurrence table (the ``count`` command)."""
    if fmt is RenderFormat.JSON:
        return canonical_json(
            {"corpus_id": table.corpus_id, "count_mode": table.mode.value, "example_count": table.example_count, "counts": table.counts, "diagnostics": table.diagnostics}
        )
    if fmt is RenderFormat.CSV:
        return _to_csv([("occurrence", PROGRAMS_ROW, table.example_count), *(("occurrence", name, count) for name, count in table.counts.items())])
    lines = [f"# Occurrences: {table.corpus_id}", "", *_occurrence_markdown(table.counts, table.example_count, _columns(symbol_spec or {}))]
    return "\n".join(lines) + "\n"


def render_tiers(corpus_id: str, histogram: Mapping[Tier, int], first_n: int | None, fmt: RenderFormat = RenderFormat.JSON) -> str:
    """Render a tier histogram (the ``classify`` command)."""
    classified = sum(histogram.values())
    if fmt is RenderFormat.JSON:
        return canonical_json(
            {"corpus_id": corpus_id, "first_n": first_n, "examples_classified": classified, "tier_histogram": {tier.value: histogram.get(tier, 0) for tier in Tier}}
        )
    if fmt is RenderFormat.CSV:
        return _to_csv((("tier", tier.value, histogram.get(tier, 0)) for tier in Tier))
    scope = f"first {first_n}" if first_n is not None else "all"
    lines = [f"# Tiers: {corpus_id} ({scope}, {classified} examples)", "", *_md_table(("Tier", "Examples"), [(tier.value, histogram.get(tier, 0)) for tier in Tier], ("l", "r"))]
    return "\n".join(lines) + "\n"


def render_details(frame: pd.DataFrame) -> str:
    """Per-example profile rows as CSV."""
    return frame.to_csv(index=False, quoting=csv.QUOTE_ALL, lineterminator="\n")


def render_diff(report: DiffReport, fmt: RenderFormat = RenderFormat.JSON, decimals: int | None = 1) -> str:
    """Render a diff; deltas are right minus left."""
    if fmt is RenderFormat.JSON:
        return canonical_json(report.to_dict())
    rows: list[tuple[str, str, Any]] = [
        ("summary", "example_count", report.example_count),
        ("summary", "loc_total", report.loc_total),
        ("summary", "loc_mean", report.loc_mean),
        ("summary", "class_definition_count", report.class_definition_count),
    ]
    rows.extend(("occurrence", name, delta) for name, delta in report.count_deltas.items())
    rows.extend(("tier", name, delta) for name, delta in report.tier_deltas.items())
    rows.extend(("call", name, delta) for name, delta in report.call_deltas.items())
    rows.extend(("absence", name, delta) for name, delta in report.absence_deltas.items())
    if fmt is RenderFormat.CSV:
        return _to_csv(rows, ("section", "name", "delta"))
    lines = [f"# Diff: {report.left_id} -> {report.right_id}", "", "Deltas are right minus left.", ""]
    lines += _md_table(("Section", "Name", "Delta"), [(section, name, _number(delta, decimals)) for section, name, delta in rows], ("l", "l", "r"))
    return "\n".join(lines) + "\n"
