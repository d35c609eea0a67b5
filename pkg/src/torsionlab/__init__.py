"""Torsional rigidity, Dirichlet spectra and heat content of rectangles,
right isosceles triangles and their disjoint unions."""

from .geometry import (
    Region,
    Shape,
    area,
    chapman_pair,
    parse_region,
    rectangle,
    scale,
    square,
    triangle,
)

__version__ = "0.1.0"

__all__ = [
    "Region",
    "Shape",
    "area",
    "chapman_pair",
    "parse_region",
    "rectangle",
    "scale",
    "square",
    "triangle",
]
