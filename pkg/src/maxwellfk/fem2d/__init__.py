"""P1 finite elements for the Dirichlet and Neumann Laplacian on rectilinear polygons."""
from .assemble import DegenerateTriangle, assemble
from .eigen import (
    ConvergenceError,
    EigenResult,
    dirichlet_eig1,
    neumann_eig1,
    observed_order,
    richardson_extrapolate,
    subspace_iteration,
)
from .mesh import (
    DEFAULT_DOF_CAP,
    Box,
    DofBudgetExceeded,
    TriMesh,
    dof_cap,
    dumbbell_regions,
    graded_nodes,
    mesh_dumbbell,
    mesh_from_grids,
    mesh_rectilinear,
    refine,
)
from .vtk import vtk_string, write_vtk

__all__ = [
    "DEFAULT_DOF_CAP",
    "Box",
    "ConvergenceError",
    "DegenerateTriangle",
    "DofBudgetExceeded",
    "EigenResult",
    "TriMesh",
    "assemble",
    "dirichlet_eig1",
    "dof_cap",
    "dumbbell_regions",
    "graded_nodes",
    "mesh_dumbbell",
    "mesh_from_grids",
    "mesh_rectilinear",
    "neumann_eig1",
    "observed_order",
    "refine",
    "richardson_extrapolate",
    "subspace_iteration",
    "vtk_string",
    "write_vtk",
]
