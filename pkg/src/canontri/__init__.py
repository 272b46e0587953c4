"""Canonical layered triangulations of punctured-torus bundles, 4-punctured
sphere bundles and two-bridge link complements, with volume maximization
over angle structures and a Euclidean check of the cusp geometry."""

from .angles import AngleStructure, angles_from_w, initial_structure
from .farey import matrix_to_word, parse_bridge_word, parse_bundle_word, parse_matrix
from .geometry import develop_cusp, fan_diagnostics, geodesic_complex_lengths, holonomy_residuals
from .lobachevsky import lobachevsky
from .rnlm import rnlm_crosscheck, solve_rnlm
from .triangulation import build_bridge_triangulation, build_bundle_triangulation
from .volume import V3, V8, maximize_volume, total_volume

__all__ = [
    "AngleStructure",
    "angles_from_w",
    "initial_structure",
    "matrix_to_word",
    "parse_bridge_word",
    "parse_bundle_word",
    "parse_matrix",
    "develop_cusp",
    "fan_diagnostics",
    "geodesic_complex_lengths",
    "holonomy_residuals",
    "lobachevsky",
    "rnlm_crosscheck",
    "solve_rnlm",
    "build_bridge_triangulation",
    "build_bundle_triangulation",
    "V3",
    "V8",
    "maximize_volume",
    "total_volume",
]
