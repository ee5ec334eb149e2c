"""Corpus Audit Module."""  # noqa: N999

__version__ = "0.1.0"
