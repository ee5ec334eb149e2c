"""Per-example analysis, optionally fanned out over a process pool."""

from __future__ import annotations

import logging
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import TYPE_CHECKING, TypeVar

from tqdm import tqdm

from Corpus_Audit.features.detectors import FeatureProfile, detect_features
from Corpus_Audit.features.functions import CallSiteKind, call_sites, find_functions, function_tokens
from Corpus_Audit.lexing.lexkit import TokenKind, tokenize
from Corpus_Audit.metrics.metrics import CountMode, count_example, loc_proxy

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from Corpus_Audit.corpus.corpus_model import Corpus, Example
    from Corpus_Audit.features.catalog import ElementaryCatalog
    from Corpus_Audit.metrics.metrics import SymbolSpec

logger = logging.getLogger(__name__)

T = TypeVar("T")

# examples handed to a worker at a time
CHUNK_SIZE = 32


@dataclass(frozen=True)
class ReviewItem:
    """A UserCross call site listed for manual review."""

    example_index: int
    callee: str
    caller: str | None
    line: int

    def to_dict(self) -> dict:
        return {"example_index": self.example_index, "callee": self.callee, "caller": self.caller, "line": self.line}


@dataclass(frozen=True)
class ExampleAnalysis:
    """Everything a report needs from one example."""

    index: int
    counts: dict[str, int]
    loc: int
    profile: FeatureProfile
    keyword_counts: dict[str, int]
    class_lines: tuple[int, ...]
    review_items: tuple[ReviewItem, ...]
    diagnostics: tuple[str, ...]


def analyze_example(
    example: Example,
    spec: SymbolSpec,
    catalog: ElementaryCatalog,
    mode: CountMode = CountMode.TOKEN,
    absence_symbols: Sequence[str] = (),
) -> ExampleAnalysis:
    """Count symbols, measure the LOC proxy and profile features of one example."""
    counts, lex_notes = count_example(example, spec, mode)
    tokens = tokenize(example.source, example.language).tokens
    keywords = Counter(token.lexeme for token in tokens if token.kind is TokenKind.KEYWORD)
    profile = detect_features(example, catalog)

    code = function_tokens(example)
    defs, structure_notes = find_functions(code, example.language)
    review = tuple(
        ReviewItem(example.index, site.callee, site.caller, site.line)
        for site in call_sites(example, defs, catalog, code)
        if site.kind is CallSiteKind.USER_CROSS
    )
    if mode is CountMode.TOKEN:
        diagnostics = lex_notes
    else:
        diagnostics = [f"example {example.index}: {error}" for error in tokenize(example.source, example.language).errors]
    diagnostics += [f"example {example.index}: {note}" for note in structure_notes]
    return ExampleAnalysis(
        index=example.index,
        counts=dict(counts),
        loc=loc_proxy(example),
        profile=profile,
        keyword_counts={symbol: keywords[symbol] for symbol in absence_symbols},
        class_lines=tuple(token.line for token in tokens if token.kind is TokenKind.KEYWORD and token.lexeme == "class"),
        review_items=review,
        diagnostics=tuple(diagnostics),
    )


def analyze_corpus(
    corpus: Corpus,
    spec: SymbolSpec,
    catalog: ElementaryCatalog,
    mode: CountMode = CountMode.TOKEN,
    absence_symbols: Sequence[str] = (),
    jobs: int = 1,
    progress: bool = False,
) -> list[ExampleAnalysis]:
    """
    Analyze every example of ``corpus`` in example order.

    Args:
        corpus (Corpus): Corpus to analyze.
        spec (SymbolSpec): Symbols to count.
        catalog (ElementaryCatalog): Feature vocabularies.
        mode (CountMode): Counting mode.
        absence_symbols (Sequence[str]): Keywords to tally for absence flags.
        jobs (int): Worker processes; 1 analyzes in-process.
        progress (bool): Show a progress bar on stderr.

    Returns
    -------
        list: One :class:`ExampleAnalysis` per example, in order.
    """
    worker = partial(analyze_example, spec=spec, catalog=catalog, mode=mode, absence_symbols=tuple(absence_symbols))
    return map_examples(worker, corpus, jobs, progress)


def profile_examples(corpus: Corpus, catalog: ElementaryCatalog, jobs: int = 1, progress: bool = False) -> list[FeatureProfile]:
    """Feature profiles of every example, in order."""
    return map_examples(partial(detect_features, catalog=catalog), corpus, jobs, progress)


def map_examples(worker: Callable[[Example], T], corpus: Corpus, jobs: int = 1, progress: bool = False) -> list[T]:
    """
    Apply a picklable ``worker`` to every example and return results in example order.

    With ``jobs > 1`` the examples are spread over a process pool; results are
    the same for every ``jobs`` value.
    """
    bar = partial(tqdm, total=len(corpus), desc=corpus.corpus_id, unit="example", file=sys.stderr, disable=not progress)
    if jobs <= 1 or len(corpus) <= 1:
        return [worker(example) for example in bar(corpus.examples)]
    logger.info("Analyzing %s examples with %s worker processes", len(corpus), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as executor:
        return list(bar(executor.map(worker, corpus.examples, chunksize=CHUNK_SIZE)))
