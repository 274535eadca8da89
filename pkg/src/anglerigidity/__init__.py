"""Angle constraints on planar frameworks: angle-rigidity matrices, colored
graphs, count conditions, extensions and enumeration."""

from .colored_graph import AngleSet, ColoredGraph, canonical_form
from .rigidity import Realization, RigidityReport, random_realization, report

__all__ = [
    "AngleSet",
    "ColoredGraph",
    "Realization",
    "RigidityReport",
    "canonical_form",
    "random_realization",
    "report",
]
__version__ = "0.1.0"
