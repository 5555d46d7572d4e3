"""Structured triangulations of a square domain with P1 nodal indexing."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Mesh:
    """Uniform triangulation of a square.

    Every grid cell is split along its lower-left to upper-right diagonal,
    giving 2*n_div**2 triangles with positive (counterclockwise) orientation
    and identical area h**2/2.  Vertices are numbered row-major with the
    first coordinate varying fastest, so vertex k sits at
    (origin[0] + (k % (n_div+1))*h, origin[1] + (k // (n_div+1))*h).
    """

    n_div: int
    side: float
    origin: tuple[float, float]
    vertices: np.ndarray   # (n_vertices, 2) float
    triangles: np.ndarray  # (n_triangles, 3) int, counterclockwise

    @property
    def h(self) -> float:
        """Spatial step: side / n_div."""
        return self.side / self.n_div

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    @property
    def key(self) -> tuple:
        """Structural identity; equal keys mean interchangeable meshes."""
        return (self.n_div, self.side, self.origin)


def build_mesh(n_div: int, side: float = 2.0, origin: tuple[float, float] = (-1.0, -1.0)) -> Mesh:
    """Triangulate the square [origin, origin + side]^2 with n_div cells per side.

    The default covers (-1,1) x (-1,1).  Rejects n_div < 1.
    """
    if n_div < 1:
        raise ValueError(f"n_div must be >= 1, got {n_div}")
    if side <= 0:
        raise ValueError(f"side must be positive, got {side}")

    n = n_div + 1
    ticks0 = origin[0] + (side / n_div) * np.arange(n)
    ticks1 = origin[1] + (side / n_div) * np.arange(n)
    # row-major, x fastest
    xx, yy = np.meshgrid(ticks0, ticks1, indexing="xy")
    vertices = np.column_stack([xx.ravel(), yy.ravel()])

    cells_i, cells_j = np.meshgrid(np.arange(n_div), np.arange(n_div), indexing="xy")
    n00 = (cells_j * n + cells_i).ravel()
    n10 = n00 + 1
    n01 = n00 + n
    n11 = n01 + 1
    # split along the n00 -> n11 diagonal; both triangles counterclockwise
    lower = np.column_stack([n00, n10, n11])
    upper = np.column_stack([n00, n11, n01])
    triangles = np.empty((2 * n_div * n_div, 3), dtype=np.int64)
    triangles[0::2] = lower
    triangles[1::2] = upper

    vertices.setflags(write=False)
    triangles.setflags(write=False)
    return Mesh(n_div=n_div, side=float(side), origin=(float(origin[0]), float(origin[1])),
                vertices=vertices, triangles=triangles)


def vertex_coordinates(mesh: Mesh, index: int) -> np.ndarray:
    """Coordinates of a vertex by row-major index."""
    if not 0 <= index < mesh.n_vertices:
        raise IndexError(f"vertex index {index} out of range [0, {mesh.n_vertices})")
    return mesh.vertices[index]


def signed_areas(mesh: Mesh) -> np.ndarray:
    """Signed area of every triangle (positive for counterclockwise)."""
    p = mesh.vertices[mesh.triangles]  # (nt, 3, 2)
    d1 = p[:, 1] - p[:, 0]
    d2 = p[:, 2] - p[:, 0]
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def edge_counts(mesh: Mesh) -> dict[tuple[int, int], int]:
    """How many triangles share each (sorted) vertex-pair edge."""
    counts: dict[tuple[int, int], int] = {}
    for a, b, c in mesh.triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            edge = (int(min(u, v)), int(max(u, v)))
            counts[edge] = counts.get(edge, 0) + 1
    return counts


def swap_axes_permutation(mesh: Mesh) -> np.ndarray:
    """Vertex permutation induced by swapping the two coordinate axes.

    Only meaningful when the mesh is its own mirror image across the main
    diagonal, which holds for the square meshes built here.
    """
    n = mesh.n_div + 1
    idx = np.arange(mesh.n_vertices)
    ix, iy = idx % n, idx // n
    return ix * n + iy
