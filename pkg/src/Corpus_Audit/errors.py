"""Exceptions raised by the corpus auditor.

Every exception carries a short upper-case ``code`` so the command line can
print one greppable line per failure (``ERROR <CODE>: <message>``).
"""

from __future__ import annotations


class AuditError(Exception):
    """Base class for all auditor errors."""

    code = "AUDIT"


class UsageError(AuditError):
    """Invalid command-line usage."""

    code = "USAGE"


class ConfigError(AuditError):
    """A configuration file is missing a key or holds an invalid value."""

    code = "CONFIG"


class IngestError(AuditError):
    """A dataset file could not be read or decoded."""

    code = "INGEST"

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        location = path or "<input>"
        if line is not None:
            location = f"{location}:{line}"
        super().__init__(f"{location}: {message}")
        self.path = path
        self.line = line


class StructuralError(AuditError):
    """Python structure markers do not describe a valid indentation."""

    code = "STRUCTURE"

    def __init__(self, message: str, example_index: int | None = None):
        prefix = "" if example_index is None else f"example {example_index}: "
        super().__init__(f"{prefix}{message}")
        self.example_index = example_index


class DiffError(AuditError):
    """Two reports cannot be compared."""

    code = "DIFF"

    def __init__(self, left_fingerprint: str, right_fingerprint: str):
        super().__init__(f"symbol spec fingerprints differ: {left_fingerprint} != {right_fingerprint}")
        self.left_fingerprint = left_fingerprint
        self.right_fingerprint = right_fingerprint


class FetchError(AuditError):
    """A dataset file could not be downloaded."""

    code = "FETCH"
