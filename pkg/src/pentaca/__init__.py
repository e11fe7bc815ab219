"""Rotation-invariant cellular automata on the pentagrid {5,4}."""

__version__ = "0.1.0"
