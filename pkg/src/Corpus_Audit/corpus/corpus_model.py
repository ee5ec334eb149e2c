"""Corpus data model and ingestion of dataset files.

The published test sets store one function per physical line, tokens separated
by single spaces. Python structure is encoded by marker tokens that
:func:`detokenize` turns back into newlines and indentation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from Corpus_Audit.errors import IngestError, StructuralError
from Corpus_Audit.utils import config_path, load_config_yaml

logger = logging.getLogger(__name__)


class SourceLanguage(str, Enum):
    """Programming language of a corpus."""

    JAVA = "java"
    CPP = "cpp"
    PYTHON = "python"

    @classmethod
    def parse(cls, tag: str) -> SourceLanguage:
        """Parse a language tag; unknown tags are an ingest error."""
        normalized = tag.strip().lower()
        aliases = {"c++": "cpp", "py": "python", "python3": "python"}
        normalized = aliases.get(normalized, normalized)
        try:
            return cls(normalized)
        except ValueError:
            msg = f"unknown language tag {tag!r} (expected java, cpp or python)"
            raise IngestError(msg) from None


class FormatTag(str, Enum):
    """Physical layout of a dataset file."""

    TOKENIZED_LINES = "tokenized-lines"
    PLAIN_SOURCE = "plain-source"


@dataclass(frozen=True)
class IngestFormat:
    """How a file is split into examples."""

    tag: FormatTag = FormatTag.TOKENIZED_LINES
    title_separator: str | None = None


@dataclass(frozen=True)
class PythonMarkers:
    """Spellings of the structural marker tokens in tokenized Python lines."""

    newline: str = "NEW_LINE"
    indent: str = "INDENT"
    dedent: str = "DEDENT"
    indent_width: int = 4


DEFAULT_MARKERS = PythonMarkers()


@dataclass(frozen=True)
class Example:
    """One corpus entry.

    ``raw`` is the original line, ``body`` the line without its title, and
    ``source`` the detokenized text derived from ``body``.
    """

    index: int
    raw: str
    source: str
    language: SourceLanguage
    title: str | None = None
    body: str | None = None

    def __post_init__(self) -> None:
        if self.body is None:
            object.__setattr__(self, "body", self.raw)


@dataclass(frozen=True)
class Corpus:
    """An ordered, immutable collection of examples sharing one language."""

    language: SourceLanguage
    examples: tuple[Example, ...]
    origin: str
    corpus_id: str
    physical_lines: int = 0
    skipped_blank_lines: int = 0
    diagnostics: tuple[str, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.examples)

    def head(self, first_n: int | None) -> Corpus:
        """Return a corpus restricted to the first ``first_n`` examples."""
        if first_n is None:
            return self
        return replace(self, examples=self.examples[:first_n])

    def concat(self, other: Corpus) -> Corpus:
        """Append ``other`` and re-index its examples after ours."""
        if other.language is not self.language:
            msg = f"cannot concatenate {self.language.value} and {other.language.value} corpora"
            raise IngestError(msg, other.origin)
        offset = len(self.examples)
        shifted = tuple(replace(example, index=example.index + offset) for example in other.examples)
        return Corpus(
            language=self.language,
            examples=self.examples + shifted,
            origin=f"{self.origin}+{other.origin}",
            corpus_id=f"{self.corpus_id}+{other.corpus_id}",
            physical_lines=self.physical_lines + other.physical_lines,
            skipped_blank_lines=self.skipped_blank_lines + other.skipped_blank_lines,
            diagnostics=self.diagnostics + other.diagnostics,
        )


@dataclass(frozen=True)
class IngestOptions:
    """Everything :func:`ingest_corpus` needs besides path and language."""

    ingest_format: IngestFormat = field(default_factory=IngestFormat)
    markers: PythonMarkers = DEFAULT_MARKERS
    encoding: str = "utf-8"


def load_ingest_options(path: str | Path | None = None) -> IngestOptions:
    """Build ingest options from ``corpus_config`` (or the file at ``path``)."""
    config = load_config_yaml(path or config_path("corpus"))
    marker_config = config.get("python_markers") or {}
    markers = PythonMarkers(
        newline=marker_config.get("newline", DEFAULT_MARKERS.newline),
        indent=marker_config.get("indent", DEFAULT_MARKERS.indent),
        dedent=marker_config.get("dedent", DEFAULT_MARKERS.dedent),
        indent_width=int(config.get("indent_width", DEFAULT_MARKERS.indent_width)),
    )
    return IngestOptions(
        ingest_format=IngestFormat(title_separator=config.get("title_separator") or None),
        markers=markers,
        encoding=config.get("encoding", "utf-8"),
    )


def split_title(raw: str, separator: str | None) -> tuple[str | None, str]:
    """
    Split a dataset line into its title and body.

    Args:
        raw (str): The line as read from the file.
        separator (str | None): Title separator; ``None`` or empty disables splitting.

    Returns
    -------
        tuple: ``(title, body)``; ``title`` is ``None`` when the separator does not occur.
    """
    if not separator or separator not in raw:
        return None, raw
    title, body = raw.split(separator, 1)
    return title.strip(), body.strip()


def detokenize(
    raw: str,
    language: SourceLanguage,
    markers: PythonMarkers = DEFAULT_MARKERS,
    *,
    example_index: int | None = None,
    clamp: bool = False,
) -> str:
    """
    Turn a tokenized line back into source text.

    Java and C++ lines are returned unchanged. For Python every newline marker
    ends a physical line, indent/dedent markers push and pop one indentation
    level, and a line is indented by the depth in force at its first token.
    A line without any marker is returned unchanged, which makes the function
    idempotent.

    Args:
        raw (str): One line of whitespace-separated tokens.
        language (SourceLanguage): Language of the line.
        markers (PythonMarkers): Marker spellings.
        example_index (int | None): Index reported in a structural error.
        clamp (bool): Ignore dedents below level zero instead of raising.

    Returns
    -------
        str: The detokenized source.

    Raises
    ------
        StructuralError: on a dedent below indentation level zero (unless ``clamp``).
    """
    if language is not SourceLanguage.PYTHON:
        return raw
    tokens = raw.split()
    if not {markers.newline, markers.indent, markers.dedent}.intersection(tokens):
        return raw

    pad = " " * markers.indent_width
    parts: list[str] = []
    current: list[str] = []
    depth = 0
    line_depth = 0
    for token in tokens:
        if token == markers.newline:
            parts.append(pad * line_depth + " ".join(current) if current else "")
            parts.append("\n")
            current = []
        elif token == markers.indent:
            depth += 1
        elif token == markers.dedent:
            if depth == 0:
                if clamp:
                    continue
                msg = "dedent below indentation level zero"
                raise StructuralError(msg, example_index)
            depth -= 1
        else:
            if not current:
                line_depth = depth
            current.append(token)
    if current:
        parts.append(pad * line_depth + " ".join(current))
    return "".join(parts)


def _read_lines(path: Path, encoding: str) -> list[str]:
    try:
        data = path.read_bytes()
    except OSError as e:
        msg = f"cannot read file: {e.strerror}"
        raise IngestError(msg, str(path)) from e

    raw_lines = data.split(b"\n")
    if raw_lines and raw_lines[-1] == b"":
        raw_lines.pop()
    lines = []
    for number, raw_line in enumerate(raw_lines, start=1):
        try:
            text = raw_line.decode(encoding)
        except UnicodeDecodeError as e:
            msg = f"undecodable bytes at column {e.start + 1} ({encoding})"
            raise IngestError(msg, str(path), number) from e
        if number == 1:
            text = text.removeprefix("\ufeff")
        lines.append(text.removesuffix("\r"))
    return lines


def _make_example(index: int, raw: str, language: SourceLanguage, options: IngestOptions, diagnostics: list[str]) -> Example:
    title, body = split_title(raw, options.ingest_format.title_separator)
    try:
        source = detokenize(body, language, options.markers, example_index=index)
    except StructuralError as e:
        logger.warning("%s; ignoring the extra dedents", e)
        diagnostics.append(str(e))
        source = detokenize(body, language, options.markers, example_index=index, clamp=True)
    return Example(index=index, raw=raw, source=source, language=language, title=title, body=body)


def ingest_corpus(
    path: str | Path,
    language: SourceLanguage,
    ingest_format: IngestFormat | None = None,
    options: IngestOptions | None = None,
) -> Corpus:
    """
    Read a dataset file into a :class:`Corpus`.

    With ``TokenizedLines`` every non-empty physical line is one example and
    blank lines are skipped (their number is recorded on the corpus). With
    ``PlainSource`` the whole file is one example, or none when it is blank.

    Args:
        path (str | Path): Dataset file.
        language (SourceLanguage): Language of every example.
        ingest_format (IngestFormat | None): Overrides ``options.ingest_format``.
        options (IngestOptions | None): Markers, encoding and default format.

    Returns
    -------
        Corpus: The ingested corpus.

    Raises
    ------
        IngestError: if the file cannot be read or a line is not valid in the encoding.
    """
    options = options or IngestOptions()
    if ingest_format is not None:
        options = replace(options, ingest_format=ingest_format)
    path = Path(path)
    lines = _read_lines(path, options.encoding)
    diagnostics: list[str] = []

    examples: list[Example] = []
    skipped = 0
    if options.ingest_format.tag is FormatTag.PLAIN_SOURCE:
        text = "\n".join(lines)
        if text.strip():
            examples.append(_make_example(0, text, language, options, diagnostics))
        else:
            skipped = len(lines)
    else:
        for line in lines:
            if not line.strip():
                skipped += 1
                continue
            examples.append(_make_example(len(examples), line, language, options, diagnostics))

    logger.info("Ingested %s: %s examples, %s blank lines skipped", path, len(examples), skipped)
    return Corpus(
        language=language,
        examples=tuple(examples),
        origin=str(path),
        corpus_id=path.name,
        physical_lines=len(lines),
        skipped_blank_lines=skipped,
        diagnostics=tuple(diagnostics),
    )


def corpus_from_sources(sources: list[str], language: SourceLanguage, corpus_id: str = "<memory>") -> Corpus:
    """Build a corpus from in-memory source texts, one example each."""
    examples = tuple(Example(index=i, raw=text, source=text, language=language) for i, text in enumerate(sources))
    return Corpus(language=language, examples=examples, origin=corpus_id, corpus_id=corpus_id, physical_lines=len(examples))
