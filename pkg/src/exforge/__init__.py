"""Exact constructions of exceptional Lie algebras and their fine gradings."""

__version__ = "0.1.0"
