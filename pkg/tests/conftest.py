from pathlib import Path

import pytest

from Corpus_Audit.corpus.corpus_model import IngestFormat, SourceLanguage, ingest_corpus

FIXTURES = Path(__file__).parent / "fixtures"
DIAGONAL_SUMS = FIXTURES / "diagonal_sums"
CORPORA = FIXTURES / "corpora"
DATA_DIR = Path(__file__).parent.parent / "data"

SOURCE_FILES = {
    SourceLanguage.JAVA: DIAGONAL_SUMS / "java.java",
    SourceLanguage.CPP: DIAGONAL_SUMS / "cpp.cpp",
    SourceLanguage.PYTHON: DIAGONAL_SUMS / "python.py",
}

CORPUS_FILES = {
    SourceLanguage.JAVA: CORPORA / "java_small.tok",
    SourceLanguage.CPP: CORPORA / "cpp_small.tok",
    SourceLanguage.PYTHON: CORPORA / "python_small.tok",
}


def dataset_file(split: str, language: str) -> Path:
    """Published split file, skipping the test when it has not been downloaded."""
    path = DATA_DIR / f"transcoder_{split}.{language}.tok"
    if not path.exists():
        pytest.skip(f"{path.name} not downloaded (python -m Corpus_Audit.fetching.fetch_dataset --base-url ...)")
    return path


def fixture_sources() -> list[tuple[SourceLanguage, str]]:
    """Every bundled well-formed source: the three listings and each small-corpus example."""
    sources = [(language, path.read_text(encoding="utf-8")) for language, path in SOURCE_FILES.items()]
    for language, path in CORPUS_FILES.items():
        sources.extend((language, example.source) for example in ingest_corpus(path, language).examples)
    return sources


@pytest.fixture
def diagonal_sources():
    return {language: path.read_text(encoding="utf-8") for language, path in SOURCE_FILES.items()}


@pytest.fixture
def diagonal_corpus():
    def load(language):
        return ingest_corpus(DIAGONAL_SUMS / f"{language.value}.tok", language, IngestFormat(title_separator="|"))

    return load


@pytest.fixture
def java_corpus():
    return ingest_corpus(CORPUS_FILES[SourceLanguage.JAVA], SourceLanguage.JAVA)


@pytest.fixture
def python_corpus():
    return ingest_corpus(CORPUS_FILES[SourceLanguage.PYTHON], SourceLanguage.PYTHON)


@pytest.fixture
def cpp_corpus():
    return ingest_corpus(CORPUS_FILES[SourceLanguage.CPP], SourceLanguage.CPP)
