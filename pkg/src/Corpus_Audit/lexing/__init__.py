"""Literal- and comment-aware lexers for Java, C++ and Python."""  # noqa: N999
