"""Exact computations with quiver presentations, algebra extensions and complexes of projectives."""

__version__ = "0.1.0"
