"""Corpus data model and dataset ingestion."""  # noqa: N999
