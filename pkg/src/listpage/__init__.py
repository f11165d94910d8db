"""Toolkit for extracting structured records from multi-record HTML list pages."""

__version__ = "0.1.0"
