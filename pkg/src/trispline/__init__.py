"""Locally generated C1 polynomial spline interpolation on triangular meshes."""
from . import errors
from .basis import (KINDS, BasisFunction, BasisKind, KProvider, ProcedureConfig, RProvider,
                    TriangleBasis, basis_eval, basis_gradient, basis_value, build_basis,
                    correction_P, correction_Q, edge_gradient_reference)
from .geometry import (BarycentricTriple, Point, Triangle, Vector, barycentric, frame_coords,
                       locate)
from .mesh import (Mesh, MeshFile, ValidationReport, VertexGradientData, load_mesh, parse_mesh,
                   serialize_mesh, validate_mesh)
from .poly import Polynomial
from .shape import (ShapeFamily, make_shape_family, minimal_family, phi_star, psi_star,
                    theta_star, verify_shape_constraints)
from .spline import SplineField, sample_grid, spline_gradient, spline_value, write_csv
from .verify import (DEFAULT_SEED, AffineMap, Report, check_c1, check_degree, check_edge_shape,
                     check_invariance, check_reflection, check_vertex_conditions,
                     degree_residual)

__all__ = [
    "errors", "KINDS", "BasisFunction", "BasisKind", "KProvider", "ProcedureConfig",
    "RProvider", "TriangleBasis", "basis_eval", "basis_gradient", "basis_value", "build_basis",
    "correction_P", "correction_Q", "edge_gradient_reference", "BarycentricTriple", "Point",
    "Triangle", "Vector", "barycentric", "frame_coords", "locate", "Mesh", "MeshFile",
    "ValidationReport", "VertexGradientData", "load_mesh", "parse_mesh", "serialize_mesh",
    "validate_mesh", "Polynomial", "ShapeFamily", "make_shape_family", "minimal_family",
    "phi_star", "psi_star", "theta_star", "verify_shape_constraints", "SplineField",
    "sample_grid", "spline_gradient", "spline_value", "write_csv", "DEFAULT_SEED", "AffineMap",
    "Report", "check_c1", "check_degree", "check_edge_shape", "check_invariance",
    "check_reflection", "check_vertex_conditions", "degree_residual",
]
