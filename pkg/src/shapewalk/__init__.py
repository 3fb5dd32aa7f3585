"""Computable dynamics on homothety classes of 2-lattices in R^3."""

__version__ = "0.1.0"

from .lattice2 import Lattice2, ShapePoint, height, shape, shortest_vector  # noqa: E402
