"""Hanging-pose search and collision-aware planning for rigid objects."""

__version__ = "0.1.0"
