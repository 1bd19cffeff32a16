"""Exact kernel for iterated Laurent fields, filtered spaces, banded
operators, and adeles on the projective line, with a batch CLI."""

__version__ = "0.1.0"
