"""Deterministic dataset generation for formal-language sequence benchmarks."""

__version__ = "0.1.0"
