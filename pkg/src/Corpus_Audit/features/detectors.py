"""Per-example feature profiles and tier assignment.

An example is Elementary when everything it uses is in the elementary
catalog. Math-library use and self-recursion each move it to a "plus" tier;
any sophisticated feature makes it Sophisticated regardless of the rest.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

import pandas as pd

from Corpus_Audit.corpus.corpus_model import SourceLanguage
from Corpus_Audit.features.catalog import ElementaryCatalog, default_catalog
from Corpus_Audit.features.functions import (
    CallSite,
    CallSiteKind,
    call_sites,
    effective_qualifiers,
    find_functions,
    function_tokens,
    qualifier_chain,
)
from Corpus_Audit.lexing.lexkit import LITERAL_KINDS, Token, TokenKind, tokenize

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from Corpus_Audit.corpus.corpus_model import Corpus, Example

logger = logging.getLogger(__name__)

_STATEMENT_BOUNDARIES = frozenset({";", "{", "}"})
_OPERAND_WORDS = frozenset({"this", "new", "true", "false", "null", "nullptr"})


class FeatureTag(str, Enum):
    """Sophisticated-feature families."""

    CONTROL_EXTRA = "ControlExtra"
    BITWISE = "Bitwise"
    BUILTIN_METHODS = "BuiltinMethods"
    WRAPPER_CLASS_STATICS = "WrapperClassStatics"
    LIBRARY_GENERICS = "LibraryGenerics"
    CASTING = "Casting"
    EXCEPTION_HANDLING = "ExceptionHandling"
    CLASS_DEFINITION = "ClassDefinition"
    OTHER = "Other"


class Tier(str, Enum):
    """Feature tier of an example."""

    ELEMENTARY = "Elementary"
    ELEMENTARY_PLUS_MATH = "ElementaryPlusMath"
    ELEMENTARY_PLUS_RECURSION = "ElementaryPlusRecursion"
    ELEMENTARY_PLUS_MATH_AND_RECURSION = "ElementaryPlusMathAndRecursion"
    SOPHISTICATED = "Sophisticated"


class CastingConfidence(str, Enum):
    """How sure the casting detector is."""

    NONE = "none"
    LOW = "low"
    HIGH = "high"


def assign_tier(sophisticated: bool, uses_math: bool, uses_recursion: bool) -> Tier:
    """Map detector results to a tier."""
    if sophisticated:
        return Tier.SOPHISTICATED
    if uses_math and uses_recursion:
        return Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION
    if uses_math:
        return Tier.ELEMENTARY_PLUS_MATH
    if uses_recursion:
        return Tier.ELEMENTARY_PLUS_RECURSION
    return Tier.ELEMENTARY


@dataclass(frozen=True)
class FeatureProfile:
    """Everything the detectors found in one example."""

    example_index: int
    uses_math_library: bool
    uses_recursion: bool
    sophisticated_features: frozenset[FeatureTag]
    call_histogram: dict[CallSiteKind, int]
    casting_confidence: CastingConfidence = CastingConfidence.NONE
    user_cross_callees: tuple[str, ...] = ()
    other_constructs: tuple[str, ...] = ()
    diagnostics: tuple[str, ...] = ()
    tier: Tier = field(init=False)
    elementary_only: bool = field(init=False)

    def __post_init__(self) -> None:
        tier = assign_tier(bool(self.sophisticated_features), self.uses_math_library, self.uses_recursion)
        object.__setattr__(self, "tier", tier)
        object.__setattr__(self, "elementary_only", tier is Tier.ELEMENTARY)


@dataclass
class _Scan:
    """Mutable detector state while walking one token list."""

    catalog: ElementaryCatalog
    tags: set[FeatureTag] = field(default_factory=set)
    others: list[str] = field(default_factory=list)
    uses_math: bool = False
    casting: CastingConfidence = CastingConfidence.NONE
    angle_depth: int = 0
    stream_statement: bool = False

    def tag(self, feature: FeatureTag, construct: str | None = None) -> None:
        self.tags.add(feature)
        if construct is not None and construct not in self.others:
            self.others.append(construct)

    def cast(self, confidence: CastingConfidence) -> None:
        self.tags.add(FeatureTag.CASTING)
        if confidence is CastingConfidence.HIGH or self.casting is CastingConfidence.NONE:
            self.casting = confidence


def _keyword(scan: _Scan, token: Token, following: Token | None, previous: Token | None) -> None:
    catalog, lexeme = scan.catalog, token.lexeme
    if lexeme in catalog.control_extras or lexeme in catalog.exception_words:
        # try/catch carry both tags
        if lexeme in catalog.control_extras:
            scan.tag(FeatureTag.CONTROL_EXTRA)
        if lexeme in catalog.exception_words:
            scan.tag(FeatureTag.EXCEPTION_HANDLING)
    elif lexeme in catalog.class_words:
        scan.tag(FeatureTag.CLASS_DEFINITION)
    elif lexeme in catalog.cast_keywords:
        scan.cast(CastingConfidence.HIGH)
    elif lexeme in catalog.bitwise_operators:
        scan.tag(FeatureTag.BITWISE)
    elif lexeme not in catalog.elementary_words:
        scan.tag(FeatureTag.OTHER, lexeme)
    # C++ functional cast: ``int(x)`` in an expression
    if lexeme in catalog.cast_types and following is not None and following.lexeme == "(":
        if previous is not None and previous.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD) and previous.lexeme not in (">", "*", "&"):
            scan.cast(CastingConfidence.LOW)


def _used_as_class(tokens: Sequence[Token], index: int, catalog: ElementaryCatalog) -> bool:
    following = tokens[index + 1] if index + 1 < len(tokens) else None
    previous = tokens[index - 1] if index else None
    if following is not None and following.lexeme == "<":
        return True
    if catalog.language is SourceLanguage.CPP:
        return False
    if previous is not None and previous.lexeme == "new":
        return True
    return following is not None and (following.lexeme in ("(", ".") or following.kind is TokenKind.IDENTIFIER)


def _identifier(scan: _Scan, tokens: Sequence[Token], index: int) -> None:
    catalog = scan.catalog
    token = tokens[index]
    lexeme = token.lexeme
    following = tokens[index + 1].lexeme if index + 1 < len(tokens) else ""
    chain = effective_qualifiers(qualifier_chain(tokens, index), catalog)

    if lexeme in catalog.streams and not chain:
        scan.stream_statement = True

    if chain:
        root = chain[0]
        if following != "(" or root in catalog.math_qualifiers | catalog.wrapper_classes | catalog.library_classes:
            return
        if ".".join([*chain, lexeme]) in catalog.io or lexeme in catalog.methods:
            return
        scan.tag(FeatureTag.BUILTIN_METHODS)
        return

    if lexeme in catalog.math_qualifiers and following in (".", "::"):
        scan.uses_math = True
    elif lexeme in catalog.wrapper_classes and (following in (".", "::") or lexeme.isupper()):
        scan.tag(FeatureTag.WRAPPER_CLASS_STATICS)
    elif lexeme in catalog.library_classes and _used_as_class(tokens, index, catalog):
        scan.tag(FeatureTag.LIBRARY_GENERICS)
        if following == "<":
            scan.angle_depth += 1
    elif following == "(":
        if lexeme in catalog.math_functions:
            scan.uses_math = True
        elif lexeme in catalog.builtin_methods:
            scan.tag(FeatureTag.BUILTIN_METHODS)
        elif lexeme in catalog.cast_calls:
            scan.cast(CastingConfidence.LOW)


def _binary_operand(token: Token | None, catalog: ElementaryCatalog) -> bool:
    if token is None or token.lexeme in catalog.types or token.lexeme in catalog.library_classes:
        return False
    return token.kind is TokenKind.IDENTIFIER or token.kind in LITERAL_KINDS or token.lexeme in (")", "]")


def _operator(scan: _Scan, tokens: Sequence[Token], index: int) -> None:
    lexeme = tokens[index].lexeme
    if lexeme in (">", ">>") and scan.angle_depth:
        scan.angle_depth = max(0, scan.angle_depth - len(lexeme))
        return
    if lexeme == "<" and index and tokens[index - 1].lexeme in scan.catalog.library_classes:
        return
    if lexeme not in scan.catalog.bitwise_operators:
        return
    if lexeme in ("<<", ">>") and scan.stream_statement:
        return
    # reference declarators and address-of share the spelling of bitwise and
    if lexeme == "&" and not _binary_operand(tokens[index - 1] if index else None, scan.catalog):
        return
    scan.tag(FeatureTag.BITWISE)


def _operand_start(token: Token) -> bool:
    if token.kind in (TokenKind.IDENTIFIER, *LITERAL_KINDS):
        return True
    return token.lexeme == "(" or token.lexeme in _OPERAND_WORDS


def _paren_cast(scan: _Scan, tokens: Sequence[Token], index: int) -> None:
    """``( TypeName ) operand``: high confidence for primitive keywords, low for class names."""
    if index + 3 >= len(tokens):
        return
    name, close, operand = tokens[index + 1], tokens[index + 2], tokens[index + 3]
    if close.lexeme != ")" or name.lexeme not in scan.catalog.cast_types or not _operand_start(operand):
        return
    scan.cast(CastingConfidence.HIGH if name.kind is TokenKind.KEYWORD else CastingConfidence.LOW)


def scan_tokens(tokens: Sequence[Token], catalog: ElementaryCatalog) -> _Scan:
    """Run every token-level detector over ``tokens``."""
    scan = _Scan(catalog)
    line_statements = catalog.language is SourceLanguage.PYTHON
    for index, token in enumerate(tokens):
        previous = tokens[index - 1] if index else None
        following = tokens[index + 1] if index + 1 < len(tokens) else None
        if token.lexeme in _STATEMENT_BOUNDARIES or (line_statements and previous is not None and token.line != previous.line):
            scan.stream_statement = False
            scan.angle_depth = 0
        if token.kind is TokenKind.KEYWORD:
            _keyword(scan, token, following, previous)
        elif token.kind is TokenKind.IDENTIFIER:
            _identifier(scan, tokens, index)
        elif token.kind is TokenKind.OPERATOR:
            _operator(scan, tokens, index)
        elif token.lexeme == "(":
            _paren_cast(scan, tokens, index)
    return scan


def detect_features(example: Example, catalog: ElementaryCatalog | None = None) -> FeatureProfile:
    """
    Build the feature profile of one example.

    Args:
        example (Example): The example to classify.
        catalog (ElementaryCatalog | None): Vocabularies; the bundled catalog of the example's language when None.

    Returns
    -------
        FeatureProfile: Detected features, call histogram and tier.
    """
    catalog = catalog or default_catalog(example.language)
    tokens = function_tokens(example)
    defs, diagnostics = find_functions(tokens, example.language)
    sites = call_sites(example, defs, catalog, tokens)
    scan = scan_tokens(tokens, catalog)

    histogram: dict[CallSiteKind, int] = {}
    for site in sites:
        histogram[site.kind] = histogram.get(site.kind, 0) + 1
    cross = _user_cross(sites)
    for callee in cross:
        scan.tag(FeatureTag.OTHER, f"calls {callee}")

    lex_errors = [str(error) for error in tokenize(example.source, example.language).errors]
    return FeatureProfile(
        example_index=example.index,
        uses_math_library=scan.uses_math,
        uses_recursion=histogram.get(CallSiteKind.SELF_RECURSIVE, 0) > 0,
        sophisticated_features=frozenset(scan.tags),
        call_histogram={kind: histogram[kind] for kind in CallSiteKind if kind in histogram},
        casting_confidence=scan.casting,
        user_cross_callees=tuple(cross),
        other_constructs=tuple(scan.others),
        diagnostics=tuple(diagnostics + lex_errors),
    )


def _user_cross(sites: Iterable[CallSite]) -> list[str]:
    callees: list[str] = []
    for site in sites:
        if site.kind is CallSiteKind.USER_CROSS and site.callee not in callees:
            callees.append(site.callee)
    return callees


def detect_class_definitions(corpus: Corpus) -> tuple[int, list[tuple[int, int]]]:
    """
    Find ``class`` keyword tokens; literals and comments never match.

    Returns
    -------
        tuple: the count and ``(example_index, line)`` of every occurrence.
    """
    locations = [
        (example.index, token.line)
        for example in corpus.examples
        for token in tokenize(example.source, example.language).tokens
        if token.kind is TokenKind.KEYWORD and token.lexeme == "class"
    ]
    return len(locations), locations


def profile_corpus(corpus: Corpus, catalog: ElementaryCatalog | None = None, first_n: int | None = None) -> list[FeatureProfile]:
    """Profile the first ``first_n`` examples of ``corpus`` (all when None)."""
    catalog = catalog or default_catalog(corpus.language)
    return [detect_features(example, catalog) for example in corpus.head(first_n).examples]


def histogram_of(profiles: Iterable[FeatureProfile]) -> dict[Tier, int]:
    """Tally tiers; every tier is present."""
    tally = dict.fromkeys(Tier, 0)
    for profile in profiles:
        tally[profile.tier] += 1
    return tally


def tier_histogram(corpus: Corpus, catalog: ElementaryCatalog | None = None, first_n: int | None = None) -> dict[Tier, int]:
    """Tier tally over the first ``first_n`` examples; sums to the number classified."""
    return histogram_of(profile_corpus(corpus, catalog, first_n))


def profiles_frame(profiles: Iterable[FeatureProfile]) -> pd.DataFrame:
    """One row per example, for ``classify --details``."""
    rows = [
        {
            "example_index": profile.example_index,
            "tier": profile.tier.value,
            "elementary_only": profile.elementary_only,
            "uses_math_library": profile.uses_math_library,
            "uses_recursion": profile.uses_recursion,
            "sophisticated_features": ";".join(sorted(tag.value for tag in profile.sophisticated_features)),
            "casting_confidence": profile.casting_confidence.value,
            **{kind.value: profile.call_histogram.get(kind, 0) for kind in CallSiteKind},
            "user_cross_callees": ";".join(profile.user_cross_callees),
            "other_constructs": ";".join(profile.other_constructs),
        }
        for profile in profiles
    ]
    columns = [
        "example_index",
        "tier",
        "elementary_only",
        "uses_math_library",
        "uses_recursion",
        "sophisticated_features",
        "casting_confidence",
        *(kind.value for kind in CallSiteKind),
        "user_cross_callees",
        "other_constructs",
    ]
    return pd.DataFrame(rows, columns=columns)
