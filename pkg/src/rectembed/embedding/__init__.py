"""Explicit k-expanding embeddings: map stages, balancing, folding, certification."""

from .balance import BalanceResult, balance_linear
from .construct import (
    CertificationReport,
    construct_embedding,
    effective_margin,
    verify_k_expanding,
)
from .fold import fold_embed, make_fold2d, plan_fold
from .stages import (
    DiagonalScale,
    Fold2D,
    PermuteAxes,
    PiecewiseMap,
    Translate,
    differential,
    evaluate,
    load_map,
    map_from_json,
    map_to_json,
    save_map,
)

__all__ = [
    "BalanceResult",
    "CertificationReport",
    "DiagonalScale",
    "Fold2D",
    "PermuteAxes",
    "PiecewiseMap",
    "Translate",
    "balance_linear",
    "construct_embedding",
    "differential",
    "effective_margin",
    "evaluate",
    "fold_embed",
    "load_map",
    "make_fold2d",
    "map_from_json",
    "map_to_json",
    "plan_fold",
    "save_map",
    "verify_k_expanding",
]
