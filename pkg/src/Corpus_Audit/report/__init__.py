"""Audit report assembly, rendering and diffing."""  # noqa: N999
