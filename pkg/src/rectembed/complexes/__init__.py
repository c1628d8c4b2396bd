"""Complexes of cycles: validation, degree, gluing, tightening, homotopies."""

from .core import (
    BlockComplex,
    CycleComplex,
    FaceReport,
    HomotopyCertificate,
    TightenResult,
    ValidationReport,
    build_homotopy,
    degree,
    glue,
    threshold,
    tighten,
    top_class,
    validate,
)
from .scenario import ScenarioReport, block_side, sweepout_scenario, v_bound
from .generate import ComplexParams, cellular_complex, generate_test_complex, linear_map, perturb, zigzag_map

__all__ = [
    "BlockComplex",
    "ComplexParams",
    "CycleComplex",
    "FaceReport",
    "ScenarioReport",
    "HomotopyCertificate",
    "TightenResult",
    "ValidationReport",
    "block_side",
    "build_homotopy",
    "cellular_complex",
    "degree",
    "generate_test_complex",
    "glue",
    "linear_map",
    "sweepout_scenario",
    "perturb",
    "threshold",
    "tighten",
    "top_class",
    "v_bound",
    "validate",
    "zigzag_map",
]
