"""Per-language lexical tables: reserved words, operators and punctuation.

Reserved-word lists follow the language specifications (Java SE 21, C++20,
the running interpreter's :mod:`keyword` module). Java's ``true``, ``false``
and ``null`` and C++'s ``true``, ``false`` and ``nullptr`` are included since
they can never be identifiers.
"""

from __future__ import annotations

import keyword
import re
from dataclasses import dataclass

from Corpus_Audit.corpus.corpus_model import SourceLanguage

JAVA_KEYWORDS = frozenset(
    """
    abstract assert boolean break byte case catch char class const continue default do double
    else enum extends final finally float for goto if implements import instanceof int interface
    long native new package private protected public return short static strictfp super switch
    synchronized this throw throws transient try void volatile while true false null
    """.split()
)

CPP_KEYWORDS = frozenset(
    """
    alignas alignof and and_eq asm auto bitand bitor bool break case catch char char8_t char16_t
    char32_t class compl concept const consteval constexpr constinit const_cast continue co_await
    co_return co_yield decltype default delete do double dynamic_cast else enum explicit export
    extern false float for friend goto if inline int long mutable namespace new noexcept not not_eq
    nullptr operator or or_eq private protected public register reinterpret_cast requires return
    short signed sizeof static static_assert static_cast struct switch template this thread_local
    throw true try typedef typeid typename union unsigned using virtual void volatile wchar_t while
    xor xor_eq
    """.split()
)

PYTHON_KEYWORDS = frozenset(keyword.kwlist)

JAVA_OPERATORS = (
    ">>>=", "<<=", ">>=", ">>>", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "?", ":", "&", "|", "^",
)  # fmt: skip

CPP_OPERATORS = (
    "<=>", "<<=", ">>=", "->*", "->", "::", ".*", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "##",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "?", ":", "&", "|", "^", "#",
)  # fmt: skip

PYTHON_OPERATORS = (
    "**=", "//=", ">>=", "<<=", "->", ":=", "**", "//", "<<", ">>", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=",
    "+", "-", "*", "/", "%", "@", "&", "|", "^", "~", "<", ">", "=",
)  # fmt: skip

JAVA_PUNCT = ("...", "(", ")", "[", "]", "{", "}", ";", ",", ".", "@")
CPP_PUNCT = ("...", "(", ")", "[", "]", "{", "}", ";", ",", ".")
PYTHON_PUNCT = ("...", "(", ")", "[", "]", "{", "}", ";", ",", ".", ":")

_EXPONENT = r"(?:[eE][+-]?\d[\d{sep}]*)"


@dataclass(frozen=True)
class LanguageTable:
    """Everything the scanner needs to know about one language."""

    language: SourceLanguage
    keywords: frozenset[str]
    operators: tuple[str, ...]
    punct: tuple[str, ...]
    identifier: re.Pattern[str]
    integer: re.Pattern[str]
    floating: re.Pattern[str]
    symbol: re.Pattern[str]
    line_comment: str
    block_comments: bool
    significant_newlines: bool

    def is_punct(self, lexeme: str) -> bool:
        """Return whether a matched symbol is punctuation rather than an operator."""
        return lexeme in self.punct


def _symbol_pattern(operators: tuple[str, ...], punct: tuple[str, ...]) -> re.Pattern[str]:
    # longest alternatives first, so the regex alternation implements maximal munch
    symbols = sorted({*operators, *punct}, key=lambda s: (-len(s), s))
    return re.compile("|".join(re.escape(s) for s in symbols))


def _number_patterns(separators: str, int_suffix: str, float_suffix: str, bare_float_suffix: str = "") -> tuple[re.Pattern[str], re.Pattern[str]]:
    digits = rf"\d[\d{separators}]*"
    exponent = _EXPONENT.format(sep=separators)
    forms = [
        rf"(?:{digits})?\.\d[\d{separators}]*{exponent}?",  # 1.5  .5  1.5e3
        rf"{digits}\.{exponent}",  # 1.e5
        rf"{digits}\.(?![.\w])",  # 1.
        rf"{digits}{exponent}",  # 1e5
    ]
    floating = rf"(?:{'|'.join(forms)}){float_suffix}"
    if bare_float_suffix:
        floating += rf"|{digits}{bare_float_suffix}(?!\w)"  # 1f  2d  3j
    integer = rf"(?:0[xX][0-9a-fA-F{separators}]+|0[bB][01{separators}]+|0[oO][0-7{separators}]+|{digits}){int_suffix}"
    return re.compile(integer), re.compile(floating)


_JAVA_INT, _JAVA_FLOAT = _number_patterns("_", r"[lL]?", r"[fFdD]?", r"[fFdD]")
_CPP_INT, _CPP_FLOAT = _number_patterns("'", r"(?:[uU](?:ll|LL|l|L|z|Z)?|(?:ll|LL|l|L|z|Z)[uU]?)?", r"[fFlL]?")
_PY_INT, _PY_FLOAT = _number_patterns("_", "", r"[jJ]?", r"[jJ]")

TABLES: dict[SourceLanguage, LanguageTable] = {
    SourceLanguage.JAVA: LanguageTable(
        language=SourceLanguage.JAVA,
        keywords=JAVA_KEYWORDS,
        operators=JAVA_OPERATORS,
        punct=JAVA_PUNCT,
        identifier=re.compile(r"(?:[^\W\d]|\$)(?:\w|\$)*"),
        integer=_JAVA_INT,
        floating=_JAVA_FLOAT,
        symbol=_symbol_pattern(JAVA_OPERATORS, JAVA_PUNCT),
        line_comment="//",
        block_comments=True,
        significant_newlines=False,
    ),
    SourceLanguage.CPP: LanguageTable(
        language=SourceLanguage.CPP,
        keywords=CPP_KEYWORDS,
        operators=CPP_OPERATORS,
        punct=CPP_PUNCT,
        identifier=re.compile(r"[A-Za-z_]\w*"),
        integer=_CPP_INT,
        floating=_CPP_FLOAT,
        symbol=_symbol_pattern(CPP_OPERATORS, CPP_PUNCT),
        line_comment="//",
        block_comments=True,
        significant_newlines=False,
    ),
    SourceLanguage.PYTHON: LanguageTable(
        language=SourceLanguage.PYTHON,
        keywords=PYTHON_KEYWORDS,
        operators=PYTHON_OPERATORS,
        punct=PYTHON_PUNCT,
        identifier=re.compile(r"[^\W\d]\w*"),
        integer=_PY_INT,
        floating=_PY_FLOAT,
        symbol=_symbol_pattern(PYTHON_OPERATORS, PYTHON_PUNCT),
        line_comment="#",
        block_comments=False,
        significant_newlines=True,
    ),
}


def table_for(language: SourceLanguage) -> LanguageTable:
    """Return the lexical table of ``language``."""
    return TABLES[language]
