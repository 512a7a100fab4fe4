"""Choosability-with-separation laboratory for plane graphs."""

__version__ = "0.1.0"
