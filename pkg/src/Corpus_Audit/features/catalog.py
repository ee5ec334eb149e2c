"""The elementary catalog: what counts as first-month programming material."""

from __future__ import annotations

import logging
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Any

from Corpus_Audit.corpus.corpus_model import SourceLanguage
from Corpus_Audit.errors import ConfigError
from Corpus_Audit.utils import config_path, fingerprint, load_config_yaml

logger = logging.getLogger(__name__)


def _words(section: dict[str, Any], key: str) -> frozenset[str]:
    values = section.get(key) or []
    if not isinstance(values, list):
        msg = f"catalog entry {key!r} must be a list, got {type(values).__name__}"
        raise ConfigError(msg)
    return frozenset(str(value) for value in values)


@dataclass(frozen=True)
class ElementaryCatalog:
    """
    Vocabularies of one language used by the feature detectors.

    Every field is a set of lexemes except ``io``, whose entries may be dotted
    call chains such as ``System.out.println``. ``streams`` names the objects
    whose ``<<``/``>>`` are insertion and extraction, not shifts.
    """

    language: SourceLanguage
    types: frozenset[str]
    modifiers: frozenset[str]
    control: frozenset[str]
    words: frozenset[str]
    methods: frozenset[str]
    functions: frozenset[str]
    io: frozenset[str]
    streams: frozenset[str]
    math_qualifiers: frozenset[str]
    math_functions: frozenset[str]
    control_extras: frozenset[str]
    exception_words: frozenset[str]
    class_words: frozenset[str]
    bitwise_operators: frozenset[str]
    builtin_methods: frozenset[str]
    wrapper_classes: frozenset[str]
    library_classes: frozenset[str]
    cast_types: frozenset[str]
    cast_keywords: frozenset[str]
    cast_calls: frozenset[str]
    library_functions: frozenset[str]
    ignored_qualifiers: frozenset[str]

    @property
    def elementary_words(self) -> frozenset[str]:
        return self.types | self.modifiers | self.control | self.words

    @property
    def library_names(self) -> frozenset[str]:
        """Unqualified callees that are Library call sites."""
        return (
            self.library_functions
            | self.functions
            | self.math_functions
            | self.builtin_methods
            | self.cast_calls
            | self.library_classes
            | self.wrapper_classes
            | self.io
        )

    @classmethod
    def from_section(cls, language: SourceLanguage, section: dict[str, Any]) -> ElementaryCatalog:
        """Build the catalog of ``language`` from its YAML section."""
        elementary = section.get("elementary") or {}
        math = section.get("math") or {}
        sophisticated = section.get("sophisticated") or {}
        return cls(
            language=language,
            types=_words(elementary, "types"),
            modifiers=_words(elementary, "modifiers"),
            control=_words(elementary, "control"),
            words=_words(elementary, "words"),
            methods=_words(elementary, "methods"),
            functions=_words(elementary, "functions"),
            io=_words(elementary, "io"),
            streams=_words(elementary, "streams"),
            math_qualifiers=_words(math, "qualifiers"),
            math_functions=_words(math, "functions"),
            control_extras=_words(sophisticated, "control_extras"),
            exception_words=_words(sophisticated, "exception_words"),
            class_words=_words(sophisticated, "class_words"),
            bitwise_operators=_words(sophisticated, "bitwise_operators"),
            builtin_methods=_words(sophisticated, "builtin_methods"),
            wrapper_classes=_words(sophisticated, "wrapper_classes"),
            library_classes=_words(sophisticated, "library_classes"),
            cast_types=_words(sophisticated, "cast_types"),
            cast_keywords=_words(sophisticated, "cast_keywords"),
            cast_calls=_words(sophisticated, "cast_calls"),
            library_functions=_words(section, "library_functions"),
            ignored_qualifiers=_words(section, "ignored_qualifiers"),
        )

    def to_dict(self) -> dict[str, Any]:
        """Sorted, JSON-ready form embedded in every report."""
        data: dict[str, Any] = {"language": self.language.value}
        for item in fields(self):
            if item.name != "language":
                data[item.name] = sorted(getattr(self, item.name))
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ElementaryCatalog:
        """Inverse of :meth:`to_dict`."""
        try:
            values = {item.name: frozenset(data[item.name]) for item in fields(cls) if item.name != "language"}
            return cls(language=SourceLanguage.parse(data["language"]), **values)
        except (KeyError, TypeError) as e:
            msg = f"invalid embedded catalog: {e}"
            raise ConfigError(msg) from e

    def fingerprint(self) -> str:
        return fingerprint(self.to_dict())


def load_catalog(language: SourceLanguage, path: str | Path | None = None) -> ElementaryCatalog:
    """
    Load the catalog section of ``language``.

    Args:
        language (SourceLanguage): Section to read.
        path (str | Path | None): Catalog file; the bundled ``features_config/catalog.yaml`` when None.

    Returns
    -------
        ElementaryCatalog: The effective catalog.

    Raises
    ------
        ConfigError: if the file has no section for ``language``.
    """
    path = path or config_path("features", "catalog.yaml")
    config = load_config_yaml(path)
    section = config.get(language.value)
    if not isinstance(section, dict):
        msg = f"catalog {path} has no section for {language.value}"
        raise ConfigError(msg)
    catalog = ElementaryCatalog.from_section(language, section)
    logger.debug("Loaded %s catalog %s from %s", language.value, catalog.fingerprint(), path)
    return catalog


@lru_cache(maxsize=None)
def default_catalog(language: SourceLanguage) -> ElementaryCatalog:
    """Bundled catalog of ``language``, loaded once per process."""
    return load_catalog(language)
