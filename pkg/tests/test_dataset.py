"""Acceptance checks against the published test and validation files.

Skipped unless the files have been downloaded into ``data/``.
"""

import pytest
from conftest import dataset_file

from Corpus_Audit.corpus.corpus_model import IngestFormat, SourceLanguage, ingest_corpus
from Corpus_Audit.features.catalog import default_catalog
from Corpus_Audit.features.detectors import Tier, tier_histogram
from Corpus_Audit.metrics.metrics import CountMode, compare_to_reference, corpus_loc_stats, count_symbols, default_symbol_spec
from Corpus_Audit.report.audit_report import build_report

pytestmark = pytest.mark.dataset

TITLES = IngestFormat(title_separator="|")


def load(split, language):
    return ingest_corpus(dataset_file(split, language), SourceLanguage.parse(language), TITLES)


def test_java_test_set_matches_published_counts():
    corpus = load("test", "java")
    spec = default_symbol_spec()
    assert len(corpus) == spec.reference["Programs"]
    fits = [compare_to_reference(count_symbols(corpus, spec, mode), spec.reference) for mode in CountMode]
    assert any(frame["within_tolerance"].all() for frame in fits)


@pytest.mark.parametrize("split", ["test", "valid"])
@pytest.mark.parametrize("language", ["java", "cpp", "python"])
def test_no_class_definitions(split, language):
    corpus = load(split, language)
    report = build_report(corpus, default_symbol_spec(), default_catalog(corpus.language))
    assert report.class_definition_count == 0


def test_python_line_breaks():
    stats = corpus_loc_stats(load("test", "python"))
    assert stats.total == pytest.approx(9956, rel=0.01)
    assert stats.mean == pytest.approx(11.5, abs=0.3)


def test_java_semicolons():
    stats = corpus_loc_stats(load("test", "java"))
    assert stats.total == pytest.approx(8406, rel=0.02)
    assert stats.mean == pytest.approx(9.7, abs=0.2)


def test_java_tiers_of_the_first_hundred():
    histogram = tier_histogram(load("test", "java"), first_n=100)
    expected = {
        Tier.ELEMENTARY: 45,
        Tier.ELEMENTARY_PLUS_MATH: 14,
        Tier.ELEMENTARY_PLUS_RECURSION: 2,
        Tier.ELEMENTARY_PLUS_MATH_AND_RECURSION: 1,
        Tier.SOPHISTICATED: 38,
    }
    assert all(abs(histogram[tier] - count) <= 3 for tier, count in expected.items())
