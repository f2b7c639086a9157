"""Perforated-plate heat problem, its homogenized limit with the strange absorption term, and the tools that compare them."""

__version__ = "0.1.0"

from .errors import (
    GeometryError,
    InvalidConfigError,
    NonConvergenceError,
    ShapeError,
    UnderResolvedGeometryError,
)
from .field import (
    DomainMask,
    Grid2D,
    NodeClass,
    NormKind,
    ScalarField,
    field_axpy,
    make_grid,
    norm,
)
from .homogenized import (
    HomogenizedProblem,
    IterationTrace,
    assemble_temperature,
    fixed_point_solve,
    helmholtz_cg_solve,
    mu_from_c0,
    solve_homogenized,
)
from .multigrid import MgConfig, laplacian_apply, mg_solve
from .perforated import (
    PerforationSpec,
    build_mask,
    extend_into_holes,
    make_perforation,
    solve_perforated,
)

__all__ = [
    "DomainMask",
    "GeometryError",
    "Grid2D",
    "HomogenizedProblem",
    "InvalidConfigError",
    "IterationTrace",
    "MgConfig",
    "NodeClass",
    "NonConvergenceError",
    "NormKind",
    "PerforationSpec",
    "ScalarField",
    "ShapeError",
    "UnderResolvedGeometryError",
    "assemble_temperature",
    "build_mask",
    "extend_into_holes",
    "field_axpy",
    "fixed_point_solve",
    "helmholtz_cg_solve",
    "laplacian_apply",
    "make_grid",
    "make_perforation",
    "mg_solve",
    "mu_from_c0",
    "norm",
    "solve_homogenized",
    "solve_perforated",
]
