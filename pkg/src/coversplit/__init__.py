"""Unsplittable coverings by unit disks, special shift-chains and local-lemma splitting.

All geometry is exact (``fractions.Fraction``); floats are used only as
filters in front of exact tests.
"""

__version__ = "0.1.0"

from .hypergraph import AbstractHypergraph, Color, build_hypergraph, is_two_colorable  # noqa: E402
from .realization import Realization, build_realization, verify_realization  # noqa: E402
from .shiftchain import ShiftChain, chain_from_points, color_special_chain, validate_coloring  # noqa: E402
from .lll import CoveringInstance, build_cell_hypergraph, resample_split, verify_split  # noqa: E402

__all__ = [
    "AbstractHypergraph",
    "Color",
    "CoveringInstance",
    "Realization",
    "ShiftChain",
    "build_cell_hypergraph",
    "build_hypergraph",
    "build_realization",
    "chain_from_points",
    "color_special_chain",
    "is_two_colorable",
    "resample_split",
    "validate_coloring",
    "verify_realization",
    "verify_split",
]
