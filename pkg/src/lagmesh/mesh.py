"""Structured quadrilateral meshes: storage, topology queries, geometry.

Nodes live on an (nx+1) x (ny+1) grid over an axis-aligned rectangle and
are numbered row-major, ``node(i, j) = j*(nx+1) + i`` with ``i`` the
x index. Cells are numbered the same way on the nx x ny grid and list
their four corners counterclockwise. Topology is fixed at construction;
only the coordinate array changes as the mesh moves.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DegenerateEdgeError

__all__ = [
    "EdgeGeom",
    "QuadMesh",
    "build_uniform_mesh",
    "edge_geometry",
    "cell_boundary_flux",
    "write_snapshot",
    "read_snapshot",
]

# Max pairwise node distance in a quad: all 6 index pairs, diagonals included.
_DIAMETER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


@dataclass
class EdgeGeom:
    """Length and unit left normal of a directed edge."""

    length: float
    normal: np.ndarray  # (2,), rotate-left of the unit edge vector


def edge_geometry(x_q, x_qp) -> EdgeGeom:
    """Geometry of the directed edge from ``x_q`` to ``x_qp``.

    The normal is the edge vector rotated 90 degrees counterclockwise and
    normalized; it flips sign if the endpoints are swapped, so callers
    must keep a consistent endpoint order per edge.
    """
    e = np.asarray(x_qp, dtype=float) - np.asarray(x_q, dtype=float)
    length = float(np.hypot(e[0], e[1]))
    if length == 0.0:
        raise DegenerateEdgeError(f"coincident edge endpoints at {tuple(np.asarray(x_q, float))}")
    return EdgeGeom(length, np.array([-e[1], e[0]]) / length)


class QuadMesh:
    """Structured quadrilateral mesh on a rectangle.

    Attributes
    ----------
    node_coords : (n_nodes, 2) float array, mutated only by replacement
        through :meth:`with_coords`.
    cell_to_nodes : (n_cells, 4) int array, corners counterclockwise.
    node_to_neighbors : (n_nodes, 4) int array padded with -1, columns
        ordered west, east, south, north.
    """

    def __init__(self, nx, ny, domain, node_coords, cell_to_nodes, node_to_neighbors):
        self.nx = int(nx)
        self.ny = int(ny)
        self.domain = tuple(float(v) for v in domain)  # (x0, x1, y0, y1)
        self.node_coords = np.asarray(node_coords, dtype=float)
        self.cell_to_nodes = cell_to_nodes
        self.node_to_neighbors = node_to_neighbors
        if self.node_coords.shape != (self.n_nodes, 2):
            raise ConfigError(
                f"node_coords shape {self.node_coords.shape} does not match "
                f"{(self.n_nodes, 2)} for nx={nx}, ny={ny}"
            )

    # -- counts and indexing -------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return (self.nx + 1) * (self.ny + 1)

    @property
    def n_cells(self) -> int:
        return self.nx * self.ny

    @property
    def spacing(self):
        """Nominal (hx, hy) of the undeformed uniform grid."""
        x0, x1, y0, y1 = self.domain
        return (x1 - x0) / self.nx, (y1 - y0) / self.ny

    def node_index(self, i, j) -> int:
        if not (0 <= i <= self.nx and 0 <= j <= self.ny):
            raise IndexError(f"node (i={i}, j={j}) outside grid")
        return j * (self.nx + 1) + i

    def node_ij(self, q):
        q = int(q)
        if not 0 <= q < self.n_nodes:
            raise IndexError(f"node index {q} out of range")
        return q % (self.nx + 1), q // (self.nx + 1)

    @property
    def coords_grid(self) -> np.ndarray:
        """(ny+1, nx+1, 2) view of the coordinate array."""
        return self.node_coords.reshape(self.ny + 1, self.nx + 1, 2)

    # -- topology queries ----------------------------------------------------

    def cell_nodes(self, c) -> np.ndarray:
        """Counterclockwise corner indices of cell ``c``."""
        c = int(c)
        if not 0 <= c < self.n_cells:
            raise IndexError(f"cell index {c} out of range")
        return self.cell_to_nodes[c].copy()

    def node_neighbors(self, q) -> np.ndarray:
        """Edge-connected neighbors of node ``q`` (west, east, south, north order)."""
        q = int(q)
        if not 0 <= q < self.n_nodes:
            raise IndexError(f"node index {q} out of range")
        row = self.node_to_neighbors[q]
        return row[row >= 0].copy()

    def boundary_flag(self, q) -> str:
        """Tag for node ``q``: 'interior', 'edge:<side>' or 'corner:<sides>'."""
        i, j = self.node_ij(q)
        sides = []
        if i == 0:
            sides.append("left")
        elif i == self.nx:
            sides.append("right")
        if j == 0:
            sides.append("bottom")
        elif j == self.ny:
            sides.append("top")
        if not sides:
            return "interior"
        if len(sides) == 1:
            return f"edge:{sides[0]}"
        return f"corner:{sides[0]}-{sides[1]}"

    def interior_node_mask(self) -> np.ndarray:
        mask = np.zeros((self.ny + 1, self.nx + 1), dtype=bool)
        mask[1:-1, 1:-1] = True
        return mask.reshape(-1)

    # -- geometry ------------------------------------------------------------

    def cell_areas(self) -> np.ndarray:
        """Signed shoelace area of every cell (negative flags inversion)."""
        pts = self.node_coords[self.cell_to_nodes]
        x = pts[..., 0]
        y = pts[..., 1]
        xn = np.roll(x, -1, axis=-1)
        yn = np.roll(y, -1, axis=-1)
        return 0.5 * np.sum(x * yn - xn * y, axis=-1)

    def cell_area(self, c) -> float:
        c = int(c)
        if not 0 <= c < self.n_cells:
            raise IndexError(f"cell index {c} out of range")
        pts = self.node_coords[self.cell_to_nodes[c]]
        x = pts[:, 0]
        y = pts[:, 1]
        return float(0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    def cell_diameters(self) -> np.ndarray:
        """Max pairwise corner distance per cell, diagonals included."""
        pts = self.node_coords[self.cell_to_nodes]
        best = np.zeros(self.n_cells)
        for a, b in _DIAMETER_PAIRS:
            d = pts[:, a] - pts[:, b]
            np.maximum(best, np.hypot(d[:, 0], d[:, 1]), out=best)
        return best

    def cell_diameter(self, c) -> float:
        c = int(c)
        if not 0 <= c < self.n_cells:
            raise IndexError(f"cell index {c} out of range")
        pts = self.node_coords[self.cell_to_nodes[c]]
        return max(float(np.hypot(*(pts[a] - pts[b]))) for a, b in _DIAMETER_PAIRS)

    def edge_lengths(self):
        """Lengths of the horizontal and vertical edge families."""
        grid = self.coords_grid
        dh = grid[:, 1:] - grid[:, :-1]
        dv = grid[1:, :] - grid[:-1, :]
        return np.hypot(dh[..., 0], dh[..., 1]), np.hypot(dv[..., 0], dv[..., 1])

    def min_edge_length(self) -> float:
        lh, lv = self.edge_lengths()
        return float(min(lh.min(), lv.min()))

    def with_coords(self, node_coords) -> "QuadMesh":
        """New mesh sharing this topology with replaced coordinates."""
        return QuadMesh(
            self.nx, self.ny, self.domain,
            np.asarray(node_coords, dtype=float),
            self.cell_to_nodes, self.node_to_neighbors,
        )


def build_uniform_mesh(domain, nx, ny) -> QuadMesh:
    """Uniform mesh of ``nx`` x ``ny`` cells over ``domain = (x0, x1, y0, y1)``."""
    nx = int(nx)
    ny = int(ny)
    if nx < 1 or ny < 1:
        raise ConfigError(f"cell counts must be positive, got nx={nx}, ny={ny}")
    x0, x1, y0, y1 = (float(v) for v in domain)
    if not (x1 > x0 and y1 > y0):
        raise ConfigError(f"degenerate domain [{x0}, {x1}] x [{y0}, {y1}]")

    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    coords = np.empty((ny + 1, nx + 1, 2))
    coords[..., 0] = xs[None, :]
    coords[..., 1] = ys[:, None]

    nxp = nx + 1
    idx = np.arange((nx + 1) * (ny + 1)).reshape(ny + 1, nx + 1)

    ci, cj = np.meshgrid(np.arange(nx), np.arange(ny))
    n00 = cj * nxp + ci
    cell_to_nodes = np.stack([n00, n00 + 1, n00 + 1 + nxp, n00 + nxp], axis=-1)
    cell_to_nodes = np.ascontiguousarray(cell_to_nodes.reshape(-1, 4))

    nbr = np.full((ny + 1, nx + 1, 4), -1, dtype=np.int64)
    nbr[:, 1:, 0] = idx[:, :-1]   # west
    nbr[:, :-1, 1] = idx[:, 1:]   # east
    nbr[1:, :, 2] = idx[:-1, :]   # south
    nbr[:-1, :, 3] = idx[1:, :]   # north
    node_to_neighbors = np.ascontiguousarray(nbr.reshape(-1, 4))

    return QuadMesh(nx, ny, (x0, x1, y0, y1), coords.reshape(-1, 2),
                    cell_to_nodes, node_to_neighbors)


def cell_boundary_flux(mesh: QuadMesh, velocities) -> np.ndarray:
    """Per-cell boundary sum of corner velocities against outward edge normals.

    For each cell corner this adds the corner velocity dotted with the
    length-weighted outward normals of the two cell edges meeting there.
    Half of the returned value is the instantaneous rate of change of the
    cell's shoelace area when corners move with the given velocities.
    """
    vel = np.asarray(velocities, dtype=float)
    pts = mesh.node_coords[mesh.cell_to_nodes]  # (n_cells, 4, 2)
    v = vel[mesh.cell_to_nodes]
    flux = np.zeros(mesh.n_cells)
    for k in range(4):
        e_next = pts[:, (k + 1) % 4] - pts[:, k]
        e_prev = pts[:, k] - pts[:, (k - 1) % 4]
        # outward normals of a CCW cell: rotate the edge vector right
        ln_x = e_next[:, 1] + e_prev[:, 1]
        ln_y = -e_next[:, 0] - e_prev[:, 0]
        flux += v[:, k, 0] * ln_x + v[:, k, 1] * ln_y
    return flux


# -- plain-text snapshots ----------------------------------------------------
#
# "POINTS n" then one "x y" pair per line (17 significant digits), then
# "CELLS m" with four 0-based CCW node indices per line.

def write_snapshot(mesh: QuadMesh, path) -> Path:
    path = Path(path)
    lines = [f"POINTS {mesh.n_nodes}"]
    lines.extend(f"{x:.17g} {y:.17g}" for x, y in mesh.node_coords)
    lines.append(f"CELLS {mesh.n_cells}")
    lines.extend(f"{a} {b} {c} {d}" for a, b, c, d in mesh.cell_to_nodes)
    path.write_text("\n".join(lines) + "\n")
    return path


def read_snapshot(path):
    """Read a snapshot back as ``(points, cells)`` arrays."""
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("POINTS "):
        raise ConfigError(f"{path}: missing POINTS header")
    n = int(lines[0].split()[1])
    points = np.array([[float(v) for v in ln.split()] for ln in lines[1:1 + n]])
    if not lines[1 + n].startswith("CELLS "):
        raise ConfigError(f"{path}: missing CELLS header")
    m = int(lines[1 + n].split()[1])
    cells = np.array(
        [[int(v) for v in ln.split()] for ln in lines[2 + n:2 + n + m]], dtype=np.int64
    )
    if points.shape != (n, 2) or cells.shape != (m, 4):
        raise ConfigError(f"{path}: truncated snapshot")
    return points, cells
