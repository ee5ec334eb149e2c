"""Function definitions and call sites, found by token pattern matching.

Nothing here parses: a definition is a header shape (``type name ( ... ) {``
for Java and C++, ``def name (`` for Python) and a call site is an identifier
followed by ``(`` that is not such a header.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING

from Corpus_Audit.corpus.corpus_model import SourceLanguage
from Corpus_Audit.features.catalog import ElementaryCatalog, default_catalog
from Corpus_Audit.lexing.lexkit import Token, TokenKind, code_tokens, tokenize

if TYPE_CHECKING:
    from collections.abc import Sequence

    from Corpus_Audit.corpus.corpus_model import Example

logger = logging.getLogger(__name__)

QUALIFIER_SEPARATORS = frozenset({".", "::", "->"})
EXPRESSION_QUALIFIER = "<expr>"
# keywords that may directly precede a call, never a definition name
_NOT_A_RETURN_TYPE = frozenset({"new", "return", "else", "throw", "case", "delete", "sizeof", "goto", "in", "not", "and", "or"})
_HEADER_TRAILERS = frozenset({",", ".", "::", ":", "(", ")", "{", "}", "="})


class CallSiteKind(str, Enum):
    """What a call site calls."""

    SELF_RECURSIVE = "SelfRecursive"
    USER_CROSS = "UserCross"
    LIBRARY = "Library"
    UNRESOLVED = "Unresolved"


@dataclass(frozen=True)
class FunctionDef:
    """
    A function or method definition.

    ``start`` and ``end`` delimit the definition in the example's code tokens
    (``end`` exclusive); ``name_index`` is the position of the name token.
    """

    name: str
    start: int
    end: int
    parameter_count: int
    name_index: int = 0

    def encloses(self, index: int) -> bool:
        return self.start <= index < self.end


@dataclass(frozen=True)
class CallSite:
    """One classified call site, kept for manual review."""

    callee: str
    kind: CallSiteKind
    line: int
    caller: str | None


def function_tokens(example: Example) -> list[Token]:
    """Code tokens of an example, the index space of :class:`FunctionDef`."""
    return code_tokens(tokenize(example.source, example.language).tokens)


def _matching(tokens: Sequence[Token], open_index: int, opening: str, closing: str) -> int | None:
    depth = 0
    for index in range(open_index, len(tokens)):
        lexeme = tokens[index].lexeme
        if lexeme == opening:
            depth += 1
        elif lexeme == closing:
            depth -= 1
            if depth == 0:
                return index
    return None


def _parameter_count(params: Sequence[Token]) -> int:
    if not params or (len(params) == 1 and params[0].lexeme == "void"):
        return 0
    depth = 0
    commas = 0
    for token in params:
        if token.lexeme in ("(", "[", "{", "<"):
            depth += 1
        elif token.lexeme in (")", "]", "}", ">"):
            depth -= 1
        elif token.lexeme == ">>":
            depth -= 2
        elif token.lexeme == "," and depth == 0:
            commas += 1
    return commas + 1


def _python_body_end(tokens: Sequence[Token], colon: int) -> int:
    depth = 0
    for index in range(colon + 1, len(tokens)):
        kind = tokens[index].kind
        if kind is TokenKind.INDENT:
            depth += 1
        elif kind is TokenKind.DEDENT:
            depth -= 1
            if depth == 0:
                return index + 1
            if depth < 0:
                return index
    return len(tokens)


def _python_functions(tokens: Sequence[Token], diagnostics: list[str]) -> list[FunctionDef]:
    defs = []
    index = 0
    while index < len(tokens) - 2:
        token = tokens[index]
        if not (token.kind is TokenKind.KEYWORD and token.lexeme == "def" and tokens[index + 1].kind is TokenKind.IDENTIFIER and tokens[index + 2].lexeme == "("):
            index += 1
            continue
        close = _matching(tokens, index + 2, "(", ")")
        if close is None:
            diagnostics.append(f"unbalanced parentheses in the header of {tokens[index + 1].lexeme}")
            defs.append(FunctionDef(tokens[index + 1].lexeme, index, len(tokens), _parameter_count(tokens[index + 3 :]), index + 1))
            break
        colon = next((i for i in range(close + 1, len(tokens)) if tokens[i].lexeme == ":"), close)
        end = _python_body_end(tokens, colon)
        defs.append(FunctionDef(tokens[index + 1].lexeme, index, max(end, close + 1), _parameter_count(tokens[index + 3 : close]), index + 1))
        index = max(end, close + 1)
    return defs


def _is_header_name(tokens: Sequence[Token], index: int) -> bool:
    if index == 0:
        return False
    previous = tokens[index - 1]
    if previous.kind is TokenKind.KEYWORD:
        return previous.lexeme not in _NOT_A_RETURN_TYPE
    return previous.kind is TokenKind.IDENTIFIER or previous.lexeme in (">", ">>", "]", "*", "&", "&&", "::", "~")


def _brace_functions(tokens: Sequence[Token], diagnostics: list[str]) -> list[FunctionDef]:
    defs = []
    index = 0
    while index < len(tokens) - 1:
        token = tokens[index]
        if not (token.kind is TokenKind.IDENTIFIER and tokens[index + 1].lexeme == "(" and _is_header_name(tokens, index)):
            index += 1
            continue
        close = _matching(tokens, index + 1, "(", ")")
        if close is None:
            index += 1
            continue
        brace = close + 1
        # throws clauses, const/noexcept qualifiers and constructor initializers sit between ")" and "{"
        while brace < len(tokens) and tokens[brace].lexeme != "{":
            trailer = tokens[brace]
            if trailer.lexeme == ";" or not (trailer.kind in (TokenKind.KEYWORD, TokenKind.IDENTIFIER) or trailer.lexeme in _HEADER_TRAILERS or trailer.kind in (TokenKind.INT_LITERAL, TokenKind.FLOAT_LITERAL)):
                break
            brace += 1
        if brace >= len(tokens) or tokens[brace].lexeme != "{":
            index = close + 1
            continue
        end_brace = _matching(tokens, brace, "{", "}")
        if end_brace is None:
            diagnostics.append(f"unbalanced braces in the body of {token.lexeme}")
            end = len(tokens)
        else:
            end = end_brace + 1
        defs.append(FunctionDef(token.lexeme, index, end, _parameter_count(tokens[index + 2 : close]), index))
        index = end
    return defs


def find_functions(tokens: Sequence[Token], language: SourceLanguage) -> tuple[list[FunctionDef], list[str]]:
    """
    Find top-level definitions in a code-token list.

    Returns
    -------
        tuple: definitions in source order and diagnostics for unbalanced
        brackets (the affected definition then extends to the last token).
    """
    diagnostics: list[str] = []
    if language is SourceLanguage.PYTHON:
        return _python_functions(tokens, diagnostics), diagnostics
    return _brace_functions(tokens, diagnostics), diagnostics


def extract_functions(example: Example) -> list[FunctionDef]:
    """Return every top-level function or method definition of ``example``."""
    defs, diagnostics = find_functions(function_tokens(example), example.language)
    for note in diagnostics:
        logger.warning("example %s: %s", example.index, note)
    return defs


def qualifier_chain(tokens: Sequence[Token], index: int) -> list[str]:
    """Return the qualifiers before ``tokens[index]``: ``["System", "out"]`` for ``System.out.println``."""
    chain: list[str] = []
    position = index
    while position >= 2 and tokens[position - 1].lexeme in QUALIFIER_SEPARATORS:
        qualifier = tokens[position - 2]
        if qualifier.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
            # member access on an expression: ``a[i].size()``, ``f(x).length()``
            chain.insert(0, EXPRESSION_QUALIFIER)
            break
        chain.insert(0, qualifier.lexeme)
        position -= 2
    return chain


def effective_qualifiers(chain: Sequence[str], catalog: ElementaryCatalog) -> list[str]:
    """Drop leading qualifiers that do not change what is called (``this``, ``self``, ``std``)."""
    chain = list(chain)
    while chain and chain[0] in catalog.ignored_qualifiers:
        chain.pop(0)
    return chain


def _is_declaration(tokens: Sequence[Token], index: int, catalog: ElementaryCatalog) -> bool:
    previous = tokens[index - 1] if index else None
    if previous is None:
        return False
    if previous.lexeme in ("def", "class"):
        return True
    # C++ direct initialization: ``vector<int> v(n);``, ``int x(5);``
    if catalog.language is SourceLanguage.CPP:
        return previous.kind is TokenKind.IDENTIFIER or previous.lexeme in (">", ">>") or previous.lexeme in catalog.types
    return False


def call_sites(example: Example, defs: Sequence[FunctionDef], catalog: ElementaryCatalog, tokens: Sequence[Token] | None = None) -> list[CallSite]:
    """
    Classify every call site of ``example``.

    A qualified callee is a Library call, except that ``this``/``self``
    qualifiers are ignored. Otherwise the callee is SelfRecursive when it names
    the enclosing definition, UserCross when it names another definition of the
    example, Library when it is a known library name, and Unresolved otherwise.
    """
    tokens = function_tokens(example) if tokens is None else tokens
    headers = {definition.name_index for definition in defs}
    names = {definition.name for definition in defs}
    sites = []
    for index in range(len(tokens) - 1):
        token = tokens[index]
        if token.kind is not TokenKind.IDENTIFIER or tokens[index + 1].lexeme != "(" or index in headers:
            continue
        if _is_declaration(tokens, index, catalog):
            continue
        enclosing = next((definition.name for definition in defs if definition.encloses(index)), None)
        qualifiers = effective_qualifiers(qualifier_chain(tokens, index), catalog)
        if qualifiers:
            kind = CallSiteKind.LIBRARY
        elif token.lexeme == enclosing:
            kind = CallSiteKind.SELF_RECURSIVE
        elif token.lexeme in names:
            kind = CallSiteKind.USER_CROSS
        elif token.lexeme in catalog.library_names:
            kind = CallSiteKind.LIBRARY
        else:
            kind = CallSiteKind.UNRESOLVED
        sites.append(CallSite(token.lexeme, kind, token.line, enclosing))
    return sites


def classify_calls(example: Example, defs: Sequence[FunctionDef], catalog: ElementaryCatalog | None = None) -> dict[CallSiteKind, int]:
    """
    Histogram of call-site kinds; only kinds that occur are present.

    Args:
        example (Example): The example to scan.
        defs (Sequence[FunctionDef]): Definitions extracted from the same example.
        catalog (ElementaryCatalog | None): Library names; the bundled catalog of the example's language when None.

    Returns
    -------
        dict: ``CallSiteKind -> count``.
    """
    catalog = catalog or default_catalog(example.language)
    counts = Counter(site.kind for site in call_sites(example, defs, catalog))
    return {kind: counts[kind] for kind in CallSiteKind if counts[kind]}
