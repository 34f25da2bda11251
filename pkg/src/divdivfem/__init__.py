"""Exact rational finite element divdiv complexes on cuboid and tetrahedral grids."""

__version__ = "0.1.0"
