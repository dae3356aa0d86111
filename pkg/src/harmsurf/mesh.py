"""Wavefront OBJ export of a surface sampled on a polar grid."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .diffgeo import PolarGrid
from .errors import UnsupportedDimensionError
from .functionals import mesh_vertices
from .surfaces import HarmonicSurface


def mesh_faces(grid: PolarGrid) -> np.ndarray:
    """Triangles as 0-based vertex indices, counterclockwise in the parameter disk.

    Vertex 0 is the centre; ring i (0-based, innermost first) occupies
    indices 1 + i * nt .. (i + 1) * nt.  The centre connects to ring 0 by a fan
    of nt triangles; each annular quad between rings i and i + 1 is split
    along its (inner j, outer j + 1) diagonal.
    """
    nr, nt = grid.n_radial, grid.n_angular
    idx = 1 + np.arange(nr * nt).reshape(nr, nt)
    nxt = np.roll(idx, -1, axis=1)
    fan = np.column_stack([np.zeros(nt, int), idx[0], nxt[0]])
    a, d = idx[:-1].ravel(), nxt[:-1].ravel()
    b, c = idx[1:].ravel(), nxt[1:].ravel()
    quads = np.stack([np.column_stack([a, b, c]), np.column_stack([a, c, d])], axis=1)
    return np.concatenate([fan, quads.reshape(-1, 3)])


def obj_text(s: HarmonicSurface, grid: PolarGrid) -> str:
    if s.dimension > 3:
        raise UnsupportedDimensionError(
            f"OBJ needs n <= 3, surface has n = {s.dimension}; project onto three coordinates first")
    verts = mesh_vertices(s, grid)
    if s.dimension < 3:
        verts = np.hstack([verts, np.zeros((verts.shape[0], 3 - s.dimension))])
    faces = mesh_faces(grid)
    nr, nt = grid.n_radial, grid.n_angular
    lines = [
        f"# harmsurf mesh of {s.name}",
        f"# polar grid: {nr} rings x {nt} angles, r_max = {grid.r_max!r}",
        "# vertex 1 is the centre, then rings from the inside out, angles increasing",
        f"# faces: {nt} fan triangles at the centre + 2 per quad between rings"
        f" = {len(faces)} triangles, counterclockwise",
        f"# {len(verts)} vertices",
    ]
    lines += ["v " + " ".join(repr(float(x)) for x in v) for v in verts]
    lines += [f"f {i + 1} {j + 1} {k + 1}" for i, j, k in faces]
    return "\n".join(lines) + "\n"


def export_mesh(s: HarmonicSurface, grid: PolarGrid, path) -> Path:
    path = Path(path)
    path.write_text(obj_text(s, grid))
    return path
