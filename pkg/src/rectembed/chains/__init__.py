"""Cubical chains on rectangular grids: boundaries, fillings, pushes, and an exact oracle."""

from .fill import FillResult, PushResult, ff_push, fill_relative_cycle, in_coarse_skeleton, sweep
from .generate import random_chain, random_relative_cycle
from .grid import (
    Cell,
    CubicalChain,
    CubicalGrid,
    boundary,
    cell_measure,
    is_relative_cycle,
    on_boundary,
    rel,
    volume,
)
from .oracle import minimal_filling_oracle

__all__ = [
    "Cell",
    "CubicalChain",
    "CubicalGrid",
    "FillResult",
    "PushResult",
    "boundary",
    "cell_measure",
    "ff_push",
    "fill_relative_cycle",
    "in_coarse_skeleton",
    "is_relative_cycle",
    "minimal_filling_oracle",
    "on_boundary",
    "random_chain",
    "random_relative_cycle",
    "rel",
    "sweep",
    "volume",
]
