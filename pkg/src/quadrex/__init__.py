"""Explicit extremal metrics on labeled convex quadrilaterals.

Exact rational pipeline (``polytope``, ``moments``, ``solver``, ``cones``,
``rationality``, ``sasaki``) plus a floating-point oracle (``verify``).
"""

__version__ = "0.1.0"

from .polytope import LabeledQuadrilateral, classify, characteristic_pair  # noqa: E402
from .solver import solve  # noqa: E402

__all__ = ["LabeledQuadrilateral", "classify", "characteristic_pair", "solve", "__version__"]
