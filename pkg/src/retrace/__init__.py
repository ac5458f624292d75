"""Toolkit for analyzing the citation history of a retracted article."""

__version__ = "0.1.0"
