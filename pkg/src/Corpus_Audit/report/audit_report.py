"""Corpus-level audit reports and report diffs."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Any

from Corpus_Audit.errors import ConfigError, DiffError
from Corpus_Audit.features.detectors import Tier, histogram_of
from Corpus_Audit.features.functions import CallSiteKind
from Corpus_Audit.metrics.metrics import CountMode, LocStats, OccurrenceTable, best_mode, compare_to_reference, count_symbols
from Corpus_Audit.report.pipeline import ReviewItem, analyze_corpus
from Corpus_Audit.utils import config_path, load_config_yaml

if TYPE_CHECKING:
    from collections.abc import Mapping
    from pathlib import Path

    from Corpus_Audit.corpus.corpus_model import Corpus
    from Corpus_Audit.features.catalog import ElementaryCatalog
    from Corpus_Audit.metrics.metrics import SymbolSpec

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class AbsenceFlag:
    """A keyword that is (or is not) expected to be absent from the corpus."""

    symbol: str
    expected_absent: bool
    observed_count: int = 0

    @property
    def violated(self) -> bool:
        return self.expected_absent and self.observed_count > 0

    def to_dict(self) -> dict[str, Any]:
        return {"symbol": self.symbol, "expected_absent": self.expected_absent, "observed_count": self.observed_count, "violated": self.violated}


@dataclass(frozen=True)
class ReportConfig:
    """Settings from ``report_config``."""

    absence_flags: tuple[AbsenceFlag, ...] = ()
    decimals: int | None = 1
    reference_tolerance: float = 0.02

    @property
    def absence_symbols(self) -> list[str]:
        return [flag.symbol for flag in self.absence_flags]


def load_report_config(path: str | Path | None = None) -> ReportConfig:
    """Read absence flags and rendering settings."""
    config = load_config_yaml(path or config_path("report"))
    try:
        flags = tuple(AbsenceFlag(str(entry["symbol"]), bool(entry.get("expected_absent", True))) for entry in config.get("absence_flags") or [])
    except (KeyError, TypeError, AttributeError) as e:
        msg = f"invalid absence flag in report config: {e}"
        raise ConfigError(msg) from e
    decimals = config.get("decimals", 1)
    return ReportConfig(flags, None if decimals is None else int(decimals), float(config.get("reference_tolerance", 0.02)))


def _zero_calls() -> dict[CallSiteKind, int]:
    return dict.fromkeys(CallSiteKind, 0)


@dataclass
class AuditReport:
    """Everything known about one corpus."""

    corpus_id: str
    language: str
    example_count: int
    occurrence_table: OccurrenceTable
    loc_stats: LocStats
    tier_histogram: dict[Tier, int]
    call_histogram_total: dict[CallSiteKind, int]
    class_definition_count: int
    absence_flags: list[AbsenceFlag]
    catalog_fingerprint: str
    symbol_spec_fingerprint: str
    count_mode: CountMode = CountMode.TOKEN
    catalog: dict[str, Any] = field(default_factory=dict)
    symbol_spec: dict[str, Any] = field(default_factory=dict)
    class_definition_locations: list[tuple[int, int]] = field(default_factory=list)
    brace_imbalances: list[str] = field(default_factory=list)
    review_items: list[ReviewItem] = field(default_factory=list)
    reference_fit: dict[str, Any] | None = None
    diagnostics: list[str] = field(default_factory=list)

    @property
    def violations(self) -> list[AbsenceFlag]:
        return [flag for flag in self.absence_flags if flag.violated]

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready form; :func:`report_from_dict` is its inverse."""
        return {
            "schema_version": SCHEMA_VERSION,
            "corpus_id": self.corpus_id,
            "language": self.language,
            "example_count": self.example_count,
            "count_mode": self.count_mode.value,
            "occurrence_table": {name: count for name, count in self.occurrence_table.counts.items()},
            "loc_stats": {"per_example": list(self.loc_stats.per_example), "total": self.loc_stats.total, "mean": self.loc_stats.mean},
            "tier_histogram": {tier.value: count for tier, count in self.tier_histogram.items()},
            "call_histogram_total": {kind.value: count for kind, count in self.call_histogram_total.items()},
            "class_definition_count": self.class_definition_count,
            "class_definition_locations": [list(location) for location in self.class_definition_locations],
            "absence_flags": [flag.to_dict() for flag in self.absence_flags],
            "catalog_fingerprint": self.catalog_fingerprint,
            "catalog": self.catalog,
            "symbol_spec_fingerprint": self.symbol_spec_fingerprint,
            "symbol_spec": self.symbol_spec,
            "brace_imbalances": self.brace_imbalances,
            "review_items": [item.to_dict() for item in self.review_items],
            "reference_fit": self.reference_fit,
            "diagnostics": self.diagnostics,
        }


def report_from_dict(data: Mapping[str, Any]) -> AuditReport:
    """Rebuild a report from its JSON form."""
    try:
        mode = CountMode(data["count_mode"])
        loc = data["loc_stats"]
        return AuditReport(
            corpus_id=data["corpus_id"],
            language=data["language"],
            example_count=data["example_count"],
            occurrence_table=OccurrenceTable(data["corpus_id"], dict(data["occurrence_table"]), data["example_count"], mode),
            loc_stats=LocStats(tuple(loc["per_example"]), loc["total"], loc["mean"]),
            tier_histogram={Tier(name): count for name, count in data["tier_histogram"].items()},
            call_histogram_total={CallSiteKind(name): count for name, count in data["call_histogram_total"].items()},
            class_definition_count=data["class_definition_count"],
            absence_flags=[AbsenceFlag(flag["symbol"], flag["expected_absent"], flag["observed_count"]) for flag in data["absence_flags"]],
            catalog_fingerprint=data["catalog_fingerprint"],
            symbol_spec_fingerprint=data["symbol_spec_fingerprint"],
            count_mode=mode,
            catalog=data.get("catalog") or {},
            symbol_spec=data.get("symbol_spec") or {},
            class_definition_locations=[(index, line) for index, line in data.get("class_definition_locations") or []],
            brace_imbalances=list(data.get("brace_imbalances") or []),
            review_items=[ReviewItem(**item) for item in data.get("review_items") or []],
            reference_fit=data.get("reference_fit"),
            diagnostics=list(data.get("diagnostics") or []),
        )
    except (KeyError, TypeError, ValueError) as e:
        msg = f"not an audit report: {e}"
        raise ConfigError(msg) from e


def _reference_fit(corpus: Corpus, spec: SymbolSpec, table: OccurrenceTable, tolerance: float) -> dict[str, Any]:
    other = CountMode.RAW_SUBSTRING if table.mode is CountMode.TOKEN else CountMode.TOKEN
    tables = {table.mode: table, other: count_symbols(corpus, spec, other)}
    errors = {}
    within = {}
    for mode, mode_table in tables.items():
        comparison = compare_to_reference(mode_table, spec.reference, tolerance)
        errors[mode.value] = float(comparison["relative_error"].max()) if len(comparison) else 0.0
        within[mode.value] = bool(comparison["within_tolerance"].all())
    best = best_mode(tables, spec.reference).value
    logger.info("Reference fit: %s (max relative error %s)", best, errors[best])
    return {"max_relative_error": errors, "within_tolerance": within, "best_mode": best, "tolerance": tolerance}


def build_report(
    corpus: Corpus,
    spec: SymbolSpec,
    catalog: ElementaryCatalog,
    *,
    mode: CountMode = CountMode.TOKEN,
    report_config: ReportConfig | None = None,
    jobs: int = 1,
    progress: bool = False,
    compare_reference: bool = False,
) -> AuditReport:
    """
    Run metrics and features over ``corpus`` and assemble the report.

    Per-example problems end up in ``diagnostics``; a single bad example never
    aborts the report. The result is identical for every ``jobs`` value.
    """
    report_config = report_config or load_report_config()
    analyses = analyze_corpus(corpus, spec, catalog, mode, report_config.absence_symbols, jobs, progress)

    counts = dict.fromkeys(spec.names, 0)
    calls = _zero_calls()
    absence = dict.fromkeys(report_config.absence_symbols, 0)
    locations: list[tuple[int, int]] = []
    review: list[ReviewItem] = []
    diagnostics = list(corpus.diagnostics)
    for analysis in analyses:
        for name, count in analysis.counts.items():
            counts[name] += count
        for kind, count in analysis.profile.call_histogram.items():
            calls[kind] += count
        for symbol, count in analysis.keyword_counts.items():
            absence[symbol] += count
        locations.extend((analysis.index, line) for line in analysis.class_lines)
        review.extend(analysis.review_items)
        diagnostics.extend(analysis.diagnostics)

    table = OccurrenceTable(corpus.corpus_id, counts, len(corpus), mode)
    flags = [AbsenceFlag(flag.symbol, flag.expected_absent, absence[flag.symbol]) for flag in report_config.absence_flags]
    for flag in flags:
        if flag.violated:
            logger.warning("%s: %s expected absent but occurs %s times", corpus.corpus_id, flag.symbol, flag.observed_count)
    reference_fit = None
    if compare_reference and spec.reference:
        reference_fit = _reference_fit(corpus, spec, table, report_config.reference_tolerance)

    return AuditReport(
        corpus_id=corpus.corpus_id,
        language=corpus.language.value,
        example_count=len(corpus),
        occurrence_table=table,
        loc_stats=LocStats.from_counts(analysis.loc for analysis in analyses),
        tier_histogram=histogram_of(analysis.profile for analysis in analyses),
        call_histogram_total=calls,
        class_definition_count=len(locations),
        absence_flags=flags,
        catalog_fingerprint=catalog.fingerprint(),
        symbol_spec_fingerprint=spec.fingerprint(),
        count_mode=mode,
        catalog=catalog.to_dict(),
        symbol_spec=spec.to_dict(),
        class_definition_locations=locations,
        brace_imbalances=table.imbalances(),
        review_items=review,
        reference_fit=reference_fit,
        diagnostics=diagnostics,
    )


def _check_comparable(left: AuditReport, right: AuditReport) -> None:
    if left.symbol_spec_fingerprint != right.symbol_spec_fingerprint:
        raise DiffError(left.symbol_spec_fingerprint, right.symbol_spec_fingerprint)


def merge_reports(left: AuditReport, right: AuditReport) -> AuditReport:
    """
    Entrywise sum of two reports, as if their corpora had been concatenated.

    Example indices of ``right`` are shifted by ``left.example_count``.
    """
    _check_comparable(left, right)
    offset = left.example_count
    table = left.occurrence_table.merge(right.occurrence_table, f"{left.corpus_id}+{right.corpus_id}")
    right_flags = {flag.symbol: flag.observed_count for flag in right.absence_flags}
    return replace(
        left,
        corpus_id=table.corpus_id,
        example_count=left.example_count + right.example_count,
        occurrence_table=table,
        loc_stats=LocStats.from_counts(left.loc_stats.per_example + right.loc_stats.per_example),
        tier_histogram={tier: left.tier_histogram.get(tier, 0) + right.tier_histogram.get(tier, 0) for tier in Tier},
        call_histogram_total={kind: left.call_histogram_total.get(kind, 0) + right.call_histogram_total.get(kind, 0) for kind in CallSiteKind},
        class_definition_count=left.class_definition_count + right.class_definition_count,
        class_definition_locations=left.class_definition_locations + [(index + offset, line) for index, line in right.class_definition_locations],
        absence_flags=[replace(flag, observed_count=flag.observed_count + right_flags.get(flag.symbol, 0)) for flag in left.absence_flags],
        brace_imbalances=table.imbalances(),
        review_items=left.review_items + [replace(item, example_index=item.example_index + offset) for item in right.review_items],
        reference_fit=None,
        diagnostics=left.diagnostics + right.diagnostics,
    )


@dataclass
class DiffReport:
    """Right-minus-left deltas of every numeric metric."""

    left_id: str
    right_id: str
    example_count: int
    count_deltas: dict[str, int]
    tier_deltas: dict[str, int]
    call_deltas: dict[str, int]
    loc_total: int
    loc_mean: float
    class_definition_count: int
    absence_deltas: dict[str, int]

    @property
    def is_zero(self) -> bool:
        values = [self.example_count, self.loc_total, self.loc_mean, self.class_definition_count]
        for deltas in (self.count_deltas, self.tier_deltas, self.call_deltas, self.absence_deltas):
            values.extend(deltas.values())
        return not any(values)

    def to_dict(self) -> dict[str, Any]:
        return {
            "left_id": self.left_id,
            "right_id": self.right_id,
            "example_count": self.example_count,
            "count_deltas": self.count_deltas,
            "tier_deltas": self.tier_deltas,
            "call_deltas": self.call_deltas,
            "loc_total": self.loc_total,
            "loc_mean": self.loc_mean,
            "class_definition_count": self.class_definition_count,
            "absence_deltas": self.absence_deltas,
        }


def _deltas(left: Mapping[str, int], right: Mapping[str, int]) -> dict[str, int]:
    names = list(left) + [name for name in right if name not in left]
    return {name: right.get(name, 0) - left.get(name, 0) for name in names}


def diff(left: AuditReport, right: AuditReport) -> DiffReport:
    """
    Compare two reports.

    Raises
    ------
        DiffError: if the reports were counted with different symbol specs.
    """
    _check_comparable(left, right)
    return DiffReport(
        left_id=left.corpus_id,
        right_id=right.corpus_id,
        example_count=right.example_count - left.example_count,
        count_deltas=_deltas(left.occurrence_table.counts, right.occurrence_table.counts),
        tier_deltas=_deltas({t.value: c for t, c in left.tier_histogram.items()}, {t.value: c for t, c in right.tier_histogram.items()}),
        call_deltas=_deltas({k.value: c for k, c in left.call_histogram_total.items()}, {k.value: c for k, c in right.call_histogram_total.items()}),
        loc_total=right.loc_stats.total - left.loc_stats.total,
        loc_mean=right.loc_stats.mean - left.loc_stats.mean,
        class_definition_count=right.class_definition_count - left.class_definition_count,
        absence_deltas=_deltas(
            {flag.symbol: flag.observed_count for flag in left.absence_flags},
            {flag.symbol: flag.observed_count for flag in right.absence_flags},
        ),
    )
