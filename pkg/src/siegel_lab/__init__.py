"""Exact computations for Ikeda lifts, Siegel Eisenstein series and their
p-stabilizations."""

__version__ = "0.1.0"
