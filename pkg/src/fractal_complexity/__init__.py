"""Spanning-tree counts and tree entropy of self-similar fractal graphs."""

from .decimation import (
    DecimationData,
    DecimationError,
    SpectrumTable,
    assemble_laplacian,
    decimation_data,
    extract_phi_R,
    multiplicity_recursion,
    numeric_preimages,
    spectrum_numeric,
)
from .entropy import EntropyReport, bounds, complexity_sequence, entropy_report, fit_exponent_pattern
from .graph import (
    FractalPreset,
    Graph,
    PresetError,
    build_level,
    degree_census_recursive,
    load_preset,
    validate_preset,
    vertex_count_closed_form,
    wedge,
)
from .presets import CATALOG
from .treecount import (
    FactoredCount,
    count_decimation,
    count_kirchhoff_probabilistic,
    count_matrix_tree,
    log_count,
)

__all__ = [
    "DecimationData", "DecimationError", "SpectrumTable", "assemble_laplacian",
    "decimation_data", "extract_phi_R", "multiplicity_recursion", "numeric_preimages",
    "spectrum_numeric", "EntropyReport", "bounds", "complexity_sequence", "entropy_report",
    "fit_exponent_pattern", "FractalPreset", "Graph", "PresetError", "build_level",
    "degree_census_recursive", "load_preset", "validate_preset", "vertex_count_closed_form",
    "wedge", "CATALOG", "FactoredCount", "count_decimation", "count_kirchhoff_probabilistic",
    "count_matrix_tree", "log_count",
]
