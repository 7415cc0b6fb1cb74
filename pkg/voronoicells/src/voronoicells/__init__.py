"""Voronoi cells in bi-pointed planar quadrangulations

Exact generating functions of the cells, their continuum scaling function,
and the limiting laws of the cell volumes derived from them.

"""

__version__ = "0.1.0-dev"
