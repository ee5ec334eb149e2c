"""Symbol occurrence tables and line-of-code proxies.

Counting is token-aware by default: a symbol inside a string literal or a
comment never counts, and ``++`` never increments ``+``. The raw-substring
mode counts over the detokenized text instead, so that a published table
produced by plain text search can be compared like for like.
"""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import TYPE_CHECKING, Any

import pandas as pd

from Corpus_Audit.corpus.corpus_model import SourceLanguage
from Corpus_Audit.errors import ConfigError
from Corpus_Audit.lexing.lexkit import TokenKind, tokenize
from Corpus_Audit.utils import config_path, fingerprint, load_config_yaml

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping

    from Corpus_Audit.corpus.corpus_model import Corpus, Example

logger = logging.getLogger(__name__)

BRACKET_PAIRS = (("{", "}"), ("(", ")"), ("[", "]"))
_WORD = re.compile(r"\w+")


class CountMode(str, Enum):
    """How occurrences are counted."""

    TOKEN = "token"
    RAW_SUBSTRING = "raw-substring"


@dataclass(frozen=True)
class SymbolEntry:
    """One row of a symbol spec."""

    name: str
    match_kinds: frozenset[TokenKind]
    aliases: tuple[str, ...] = ()
    column: str = "symbol"

    @property
    def lexemes(self) -> tuple[str, ...]:
        return (self.name, *self.aliases)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "kinds": sorted(kind.value for kind in self.match_kinds),
            "aliases": list(self.aliases),
            "column": self.column,
        }


@dataclass(frozen=True)
class SymbolSpec:
    """Ordered list of countable symbols and reserved words."""

    symbols: tuple[SymbolEntry, ...]
    reference: Mapping[str, int] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for entry in self.symbols:
            if entry.name in seen:
                msg = f"duplicate symbol spec entry {entry.name!r}"
                raise ConfigError(msg)
            if not entry.match_kinds:
                msg = f"symbol spec entry {entry.name!r} has no token kinds"
                raise ConfigError(msg)
            seen.add(entry.name)

    @property
    def names(self) -> list[str]:
        return [entry.name for entry in self.symbols]

    def lexeme_index(self) -> dict[str, list[SymbolEntry]]:
        """Map every countable lexeme to the entries it counts for."""
        index: dict[str, list[SymbolEntry]] = {}
        for entry in self.symbols:
            for lexeme in entry.lexemes:
                index.setdefault(lexeme, []).append(entry)
        return index

    def to_dict(self) -> dict[str, Any]:
        return {"symbols": [entry.to_dict() for entry in self.symbols]}

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> SymbolSpec:
        """Build a spec from its YAML/JSON form."""
        entries = []
        for raw in data.get("symbols") or []:
            try:
                kinds = frozenset(TokenKind(kind) for kind in raw["kinds"])
                entries.append(SymbolEntry(str(raw["name"]), kinds, tuple(str(a) for a in raw.get("aliases") or ()), raw.get("column", "symbol")))
            except (KeyError, TypeError, ValueError) as e:
                msg = f"invalid symbol spec entry {raw!r}: {e}"
                raise ConfigError(msg) from e
        reference = {str(name): int(count) for name, count in (data.get("reference_java_test") or {}).items()}
        return cls(tuple(entries), reference)


def load_symbol_spec(path: str | Path | None = None) -> SymbolSpec:
    """Load a symbol spec file; the bundled Java test set rows when ``path`` is None."""
    if path is None:
        return default_symbol_spec()
    return SymbolSpec.from_dict(load_config_yaml(path))


@lru_cache(maxsize=1)
def default_symbol_spec() -> SymbolSpec:
    return SymbolSpec.from_dict(load_config_yaml(config_path("metrics", "symbols.yaml")))


@dataclass
class OccurrenceTable:
    """Symbol counts over one corpus."""

    corpus_id: str
    counts: dict[str, int]
    example_count: int
    mode: CountMode = CountMode.TOKEN
    diagnostics: list[str] = field(default_factory=list)

    def merge(self, other: OccurrenceTable, corpus_id: str | None = None) -> OccurrenceTable:
        """Entrywise sum of two tables."""
        counts = dict(self.counts)
        for name, count in other.counts.items():
            counts[name] = counts.get(name, 0) + count
        return OccurrenceTable(
            corpus_id=corpus_id or f"{self.corpus_id}+{other.corpus_id}",
            counts=counts,
            example_count=self.example_count + other.example_count,
            mode=self.mode,
            diagnostics=self.diagnostics + other.diagnostics,
        )

    def imbalances(self) -> list[str]:
        """Describe opening/closing bracket pairs whose counts differ."""
        notes = []
        for opening, closing in BRACKET_PAIRS:
            if opening in self.counts and closing in self.counts and self.counts[opening] != self.counts[closing]:
                notes.append(f"unbalanced {opening}{closing}: {opening} = {self.counts[opening]}, {closing} = {self.counts[closing]}")
        return notes


@dataclass(frozen=True)
class LocStats:
    """Line-of-code proxy per example and in total."""

    per_example: tuple[int, ...]
    total: int
    mean: float

    @classmethod
    def from_counts(cls, per_example: Iterable[int]) -> LocStats:
        values = tuple(per_example)
        total = sum(values)
        return cls(values, total, total / len(values) if values else 0.0)

    def describe(self) -> pd.Series:
        """Summary statistics (count, mean, quartiles, max) of the per-example values."""
        return pd.Series(self.per_example, dtype="int64").describe()

    @property
    def median(self) -> float:
        return float(self.describe()["50%"]) if self.per_example else 0.0

    @property
    def maximum(self) -> int:
        return int(self.describe()["max"]) if self.per_example else 0


def count_example(example: Example, spec: SymbolSpec, mode: CountMode = CountMode.TOKEN) -> tuple[Counter[str], list[str]]:
    """
    Count the symbol spec entries in one example.

    Returns
    -------
        tuple: the counts and the lexical diagnostics of the example.
    """
    counts: Counter[str] = Counter()
    if mode is CountMode.RAW_SUBSTRING:
        for entry in spec.symbols:
            counts[entry.name] += sum(_raw_count(example.source, lexeme) for lexeme in entry.lexemes)
        return counts, []

    result = tokenize(example.source, example.language)
    index = spec.lexeme_index()
    for token in result.tokens:
        for entry in index.get(token.lexeme, ()):
            if token.kind in entry.match_kinds:
                counts[entry.name] += 1
    return counts, [f"example {example.index}: {error}" for error in result.errors]


def _raw_count(text: str, lexeme: str) -> int:
    if _WORD.fullmatch(lexeme):
        return len(re.findall(rf"(?<![\w$]){re.escape(lexeme)}(?![\w$])", text))
    return text.count(lexeme)


def count_symbols(corpus: Corpus, spec: SymbolSpec, mode: CountMode = CountMode.TOKEN) -> OccurrenceTable:
    """
    Build the occurrence table of ``corpus``.

    Every spec name gets an entry, zero included. Lexical errors never stop
    counting: they are listed in the table's diagnostics and the affected
    example still counts its valid tokens.
    """
    totals: Counter[str] = Counter()
    diagnostics: list[str] = []
    for example in corpus.examples:
        counts, notes = count_example(example, spec, mode)
        totals.update(counts)
        diagnostics.extend(notes)
    if diagnostics:
        logger.warning("%s: %s lexical diagnostics while counting", corpus.corpus_id, len(diagnostics))
    return OccurrenceTable(
        corpus_id=corpus.corpus_id,
        counts={name: totals.get(name, 0) for name in spec.names},
        example_count=len(corpus.examples),
        mode=mode,
        diagnostics=diagnostics,
    )


def loc_proxy(example: Example) -> int:
    """Semicolon tokens for Java/C++, physical line breaks for Python."""
    if example.language is SourceLanguage.PYTHON:
        return example.source.count("\n")
    return sum(1 for token in tokenize(example.source, example.language).tokens if token.kind is TokenKind.PUNCT and token.lexeme == ";")


def corpus_loc_stats(corpus: Corpus) -> LocStats:
    """Aggregate :func:`loc_proxy` over every example."""
    return LocStats.from_counts(loc_proxy(example) for example in corpus.examples)


def compare_to_reference(table: OccurrenceTable, reference: Mapping[str, int], tolerance: float = 0.02) -> pd.DataFrame:
    """
    Compare a table with published counts.

    Args:
        table (OccurrenceTable): Observed counts.
        reference (Mapping[str, int]): Published counts; the ``Programs`` row is checked against the example count.
        tolerance (float): Allowed relative error per row.

    Returns
    -------
        pd.DataFrame: one row per reference entry with ``expected``, ``observed``,
        ``relative_error`` and ``within_tolerance``.
    """
    rows = []
    for name, expected in reference.items():
        observed = table.example_count if name == "Programs" else table.counts.get(name, 0)
        error = abs(observed - expected) / expected if expected else float(observed != 0)
        limit = 0.0 if name == "Programs" else tolerance
        rows.append({"name": name, "expected": expected, "observed": observed, "relative_error": error, "within_tolerance": error <= limit})
    return pd.DataFrame(rows, columns=["name", "expected", "observed", "relative_error", "within_tolerance"])


def best_mode(tables: Mapping[CountMode, OccurrenceTable], reference: Mapping[str, int]) -> CountMode:
    """Return the counting mode whose largest relative error against ``reference`` is smallest."""
    scores = {mode: compare_to_reference(table, reference)["relative_error"].max() for mode, table in tables.items()}
    return min(scores, key=lambda mode: (scores[mode], mode.value))
