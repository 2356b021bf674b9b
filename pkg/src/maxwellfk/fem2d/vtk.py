"""Legacy ASCII VTK output for triangle meshes."""
from __future__ import annotations

from pathlib import Path

import numpy as np

from .mesh import TriMesh

__all__ = ["write_vtk", "vtk_string"]

VTK_TRIANGLE = 5


def vtk_string(mesh: TriMesh, title: str = "maxwellfk mesh") -> str:
    lines = ["# vtk DataFile Version 3.0", title[:255], "ASCII", "DATASET UNSTRUCTURED_GRID"]
    lines.append(f"POINTS {mesh.n_vertices} double")
    lines.extend(f"{x!r} {y!r} 0.0" for x, y in mesh.vertices.tolist())
    m = mesh.n_triangles
    lines.append(f"CELLS {m} {4 * m}")
    lines.extend(f"3 {a} {b} {c}" for a, b, c in mesh.triangles.tolist())
    lines.append(f"CELL_TYPES {m}")
    lines.extend([str(VTK_TRIANGLE)] * m)
    names = sorted(set(mesh.region_tags.tolist()))
    codes = {name: i for i, name in enumerate(names)}
    lines.append(f"CELL_DATA {m}")
    lines.append("SCALARS region int 1")
    lines.append("LOOKUP_TABLE default")
    lines.extend(str(codes[t]) for t in mesh.region_tags.tolist())
    lines.append(f"POINT_DATA {mesh.n_vertices}")
    lines.append("SCALARS boundary int 1")
    lines.append("LOOKUP_TABLE default")
    lines.extend(str(int(f)) for f in np.asarray(mesh.boundary_flags, dtype=int).tolist())
    return "\n".join(lines) + "\n"


def write_vtk(mesh: TriMesh, path: str | Path, title: str = "maxwellfk mesh") -> Path:
    path = Path(path)
    path.write_text(vtk_string(mesh, title))
    return path
