"""Orthogonal U(n)x1-invariant decomposition of the space of (0,3)-tensors with
the symmetries of the covariant derivative of the fundamental form of an
almost contact metric structure, and the resulting 12 basic classes."""

from .classifier import ClassLabel, classify, classify_tensor, defining_residual
from .decomposition import (ComponentSpectrum, SubspaceBasis, involution, project,
                            spectrum, subspace_basis_oracle)
from .equivariance import StructureIsometry, act, random_isometry
from .forms import associated_form, h_form
from .structure import AcmStructure, ValidationReport, h_map, standard_structure, validate_structure
from .tensors import (TraceTriple, inner_product, membership_residual, project_to_space,
                      random_element, traces)

__all__ = [
    "AcmStructure", "ClassLabel", "ComponentSpectrum", "StructureIsometry",
    "SubspaceBasis", "TraceTriple", "ValidationReport", "act", "associated_form",
    "classify", "classify_tensor", "defining_residual", "h_form", "h_map",
    "inner_product", "involution", "membership_residual", "project",
    "project_to_space", "random_element", "random_isometry", "spectrum",
    "standard_structure", "subspace_basis_oracle", "traces", "validate_structure",
]
