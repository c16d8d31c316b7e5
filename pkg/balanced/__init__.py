"""Matching, cover and decomposition toolkit for balanced hypergraphs."""

__version__ = "0.1.0"
