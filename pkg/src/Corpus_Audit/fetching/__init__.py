"""Tooling to download the published test and validation files."""  # noqa: N999
