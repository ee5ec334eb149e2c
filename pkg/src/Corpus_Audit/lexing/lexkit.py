"""Tokenizer for Java, C++ and Python source.

All counting and feature detection runs on these token streams, so keywords
and symbols inside string/char literals or comments are never seen as code.
Symbols are matched by maximal munch: ``++`` is one operator, never two ``+``.

Each token records the whitespace that precedes it (``leading``), which lets
:func:`reconstruct` rebuild the original text exactly. Python ``Indent`` and
``Dedent`` tokens are synthesized from leading whitespace; they are
zero-width, carry the dataset marker spelling as lexeme and are skipped when
reconstructing.
"""

from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

from Corpus_Audit.corpus.corpus_model import SourceLanguage
from Corpus_Audit.lexing.languages import LanguageTable, table_for

logger = logging.getLogger(__name__)


class TokenKind(str, Enum):
    """Lexical class of a token."""

    KEYWORD = "Keyword"
    IDENTIFIER = "Identifier"
    INT_LITERAL = "IntLiteral"
    FLOAT_LITERAL = "FloatLiteral"
    STRING_LITERAL = "StringLiteral"
    CHAR_LITERAL = "CharLiteral"
    COMMENT = "Comment"
    OPERATOR = "Operator"
    PUNCT = "Punct"
    NEWLINE = "Newline"
    INDENT = "Indent"
    DEDENT = "Dedent"


SYNTHETIC_KINDS = frozenset({TokenKind.INDENT, TokenKind.DEDENT})
LITERAL_KINDS = frozenset({TokenKind.INT_LITERAL, TokenKind.FLOAT_LITERAL, TokenKind.STRING_LITERAL, TokenKind.CHAR_LITERAL})


@dataclass(frozen=True, slots=True)
class Token:
    """A lexeme with its kind, 1-based position and preceding whitespace."""

    kind: TokenKind
    lexeme: str
    line: int
    column: int
    leading: str = ""


@dataclass(frozen=True)
class LexOptions:
    """Switches for comment and literal retention."""

    keep_comments: bool = True
    keep_literal_contents: bool = True


DEFAULT_OPTIONS = LexOptions()


@dataclass(frozen=True)
class LexError:
    """An unterminated literal/comment or an unexpected character."""

    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


@dataclass(frozen=True)
class LexResult:
    """Tokens plus the errors met while producing them."""

    tokens: tuple[Token, ...]
    errors: tuple[LexError, ...] = ()


_PY_SPACE = re.compile(r"(?:[ \t\f\v\r]|\\\r?\n)+")
_C_SPACE = re.compile(r"(?:\s|\\\r?\n)+")
_PY_INDENT = re.compile(r"[ \t\f]*")
_PY_STRING_START = re.compile(r"(?i:rb|br|fr|rf|r|b|f|u)?('''|\"\"\"|'|\")")
_CPP_RAW_START = re.compile(r'(?:u8|u|U|L)?R"([^()\\\s"]{0,16})\(')
_CPP_STRING_START = re.compile(r"(?:u8|u|U|L)?([\"'])")
_C_QUOTE = re.compile(r"([\"'])")
_HOLLOW = re.compile(r"([A-Za-z0-9]*)(\"\"\"|'''|\"|')")


class _Scanner:
    """Single-pass scanner over one source text."""

    def __init__(self, text: str, table: LanguageTable, options: LexOptions):
        self.text = text
        self.table = table
        self.options = options
        self.pos = 0
        self.line = 1
        self.line_start = 0
        self.pending = 0
        self.tokens: list[Token] = []
        self.errors: list[LexError] = []
        self.indents = [0]
        self.paren_depth = 0
        self.at_line_start = True

    def column(self, pos: int) -> int:
        return pos - self.line_start + 1

    def advance_to(self, end: int) -> None:
        segment = self.text[self.pos : end]
        newlines = segment.count("\n")
        if newlines:
            self.line += newlines
            self.line_start = self.pos + segment.rfind("\n") + 1
        self.pos = end

    def error(self, message: str, pos: int) -> None:
        self.errors.append(LexError(message, self.line, self.column(pos)))

    def emit(self, kind: TokenKind, end: int) -> None:
        start, line, column = self.pos, self.line, self.column(self.pos)
        lexeme = self.text[start:end]
        leading = self.text[self.pending : start]
        self.advance_to(end)
        self.pending = end
        if kind is TokenKind.COMMENT and not self.options.keep_comments:
            return
        if kind in LITERAL_KINDS and not self.options.keep_literal_contents:
            lexeme = _hollow(lexeme, kind)
        self.tokens.append(Token(kind, lexeme, line, column, leading))

    def synthesize(self, kind: TokenKind, lexeme: str, pos: int) -> None:
        self.tokens.append(Token(kind, lexeme, self.line, self.column(pos)))

    def end_of_line(self, pos: int) -> int:
        newline = self.text.find("\n", pos)
        return len(self.text) if newline < 0 else newline

    def run(self) -> LexResult:
        text = self.text
        table = self.table
        space = _PY_SPACE if table.significant_newlines else _C_SPACE
        while True:
            if table.significant_newlines and self.at_line_start:
                self.at_line_start = False
                if self.paren_depth == 0:
                    self.handle_indentation()
            match = space.match(text, self.pos)
            if match:
                self.advance_to(match.end())
            if self.pos >= len(text):
                break
            self.scan_token()
        if table.significant_newlines:
            for _ in self.indents[1:]:
                self.synthesize(TokenKind.DEDENT, "DEDENT", self.pos)
        return LexResult(tuple(self.tokens), tuple(self.errors))

    def handle_indentation(self) -> None:
        match = _PY_INDENT.match(self.text, self.pos)
        after = match.end() if match else self.pos
        if after >= len(self.text) or self.text[after] in "\r\n#":
            return
        width = len(self.text[self.pos : after].expandtabs(8))
        if width > self.indents[-1]:
            self.indents.append(width)
            self.synthesize(TokenKind.INDENT, "INDENT", after)
            return
        while width < self.indents[-1]:
            self.indents.pop()
            self.synthesize(TokenKind.DEDENT, "DEDENT", after)
        if width != self.indents[-1]:
            self.error("inconsistent dedent", after)
            self.indents.append(width)

    def scan_token(self) -> None:
        text, pos, table = self.text, self.pos, self.table
        char = text[pos]
        following = text[pos + 1] if pos + 1 < len(text) else ""

        if char == "\n":
            self.emit(TokenKind.NEWLINE, pos + 1)
            self.at_line_start = True
            return
        if text.startswith(table.line_comment, pos):
            self.emit(TokenKind.COMMENT, self.end_of_line(pos))
            return
        if table.block_comments and text.startswith("/*", pos):
            close = text.find("*/", pos + 2)
            if close < 0:
                self.error("unterminated block comment", pos)
                self.emit(TokenKind.COMMENT, self.end_of_line(pos))
            else:
                self.emit(TokenKind.COMMENT, close + 2)
            return
        if self.scan_literal():
            return
        if char.isdigit() or (char == "." and following.isdigit()):
            match = table.floating.match(text, pos)
            if match:
                self.emit(TokenKind.FLOAT_LITERAL, match.end())
                return
            match = table.integer.match(text, pos)
            if match:
                self.emit(TokenKind.INT_LITERAL, match.end())
                return
        match = table.identifier.match(text, pos)
        if match:
            kind = TokenKind.KEYWORD if match.group() in table.keywords else TokenKind.IDENTIFIER
            self.emit(kind, match.end())
            return
        match = table.symbol.match(text, pos)
        if match:
            lexeme = match.group()
            if lexeme in "([{":
                self.paren_depth += 1
            elif lexeme in ")]}":
                self.paren_depth = max(0, self.paren_depth - 1)
            self.emit(TokenKind.PUNCT if table.is_punct(lexeme) else TokenKind.OPERATOR, match.end())
            return
        self.error(f"unexpected character {char!r}", pos)
        self.emit(TokenKind.OPERATOR, pos + 1)

    def scan_literal(self) -> bool:
        """Scan a string or char literal starting at the current position, if any."""
        text, pos, language = self.text, self.pos, self.table.language
        if language is SourceLanguage.PYTHON:
            match = _PY_STRING_START.match(text, pos)
            if not match:
                return False
            self.finish_quoted(TokenKind.STRING_LITERAL, match.end(), match.group(1))
            return True
        if language is SourceLanguage.CPP:
            raw = _CPP_RAW_START.match(text, pos)
            if raw:
                close = text.find(f"){raw.group(1)}\"", raw.end())
                if close < 0:
                    self.error("unterminated raw string literal", pos)
                    self.emit(TokenKind.STRING_LITERAL, self.end_of_line(pos))
                else:
                    self.emit(TokenKind.STRING_LITERAL, close + len(raw.group(1)) + 2)
                return True
            match = _CPP_STRING_START.match(text, pos)
        elif text.startswith('"""', pos):
            self.finish_quoted(TokenKind.STRING_LITERAL, pos + 3, '"""')
            return True
        else:
            match = _C_QUOTE.match(text, pos)
        if not match:
            return False
        quote = match.group(1)
        kind = TokenKind.CHAR_LITERAL if quote == "'" else TokenKind.STRING_LITERAL
        self.finish_quoted(kind, match.end(), quote)
        return True

    def finish_quoted(self, kind: TokenKind, body_start: int, quote: str) -> None:
        text = self.text
        multiline = len(quote) == 3
        i = body_start
        while i < len(text):
            char = text[i]
            if char == "\\":
                i += 2
                continue
            if char == "\n" and not multiline:
                break
            if text.startswith(quote, i):
                self.emit(kind, i + len(quote))
                return
            i += 1
        self.error(f"unterminated {'string' if kind is TokenKind.STRING_LITERAL else 'char'} literal", self.pos)
        self.emit(kind, self.end_of_line(self.pos))


def _hollow(lexeme: str, kind: TokenKind) -> str:
    if kind not in (TokenKind.STRING_LITERAL, TokenKind.CHAR_LITERAL):
        return lexeme
    match = _HOLLOW.match(lexeme)
    if not match:
        return lexeme
    return match.group(1) + match.group(2) * 2


@lru_cache(maxsize=4096)
def tokenize(source: str, language: SourceLanguage, options: LexOptions = DEFAULT_OPTIONS) -> LexResult:
    """
    Tokenize ``source`` and return the tokens with any lexical errors.

    Lexical errors never raise: an unterminated literal or comment consumes the
    rest of its line as one token, an unexpected character becomes a
    one-character operator, and scanning goes on.

    Args:
        source (str): Detokenized text of one example.
        language (SourceLanguage): Language of the text.
        options (LexOptions): Comment/literal retention switches.

    Returns
    -------
        LexResult: Tokens in source order and errors with their positions.
    """
    result = _Scanner(source, table_for(language), options).run()
    if result.errors:
        logger.debug("%s lex errors in %s source", len(result.errors), language.value)
    return result


def lex(source: str, language: SourceLanguage, options: LexOptions = DEFAULT_OPTIONS) -> list[Token]:
    """Tokenize ``source`` and return only the tokens."""
    return list(tokenize(source, language, options).tokens)


def reconstruct(tokens: Iterable[Token], original: str) -> bool:
    """
    Check that a token stream reproduces ``original`` byte for byte.

    Lexemes are joined with their recorded leading whitespace; synthesized
    Indent/Dedent tokens contribute nothing. Whitespace after the last token is
    the only text allowed to remain.
    """
    rebuilt = "".join(token.leading + token.lexeme for token in tokens if token.kind not in SYNTHETIC_KINDS)
    return original.startswith(rebuilt) and not original[len(rebuilt) :].strip()


def normalize_stream(tokens: Iterable[Token]) -> list[Token]:
    """Drop comments and erase positions so streams compare by ``(kind, lexeme)`` only."""
    return [replace(token, line=0, column=0, leading="") for token in tokens if token.kind is not TokenKind.COMMENT]


def code_tokens(tokens: Sequence[Token]) -> list[Token]:
    """Return the tokens that carry code: no comments, no Python layout tokens."""
    skipped = {TokenKind.COMMENT, TokenKind.NEWLINE}
    return [token for token in tokens if token.kind not in skipped]
