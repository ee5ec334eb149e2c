"""Occurrence tables and line-of-code proxies."""  # noqa: N999
