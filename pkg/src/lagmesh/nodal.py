"""Per-node weighted least-squares velocity reconstruction.

Each node q collects one corrected velocity sample per incident edge and
solves the 2x2 normal equations of

    min_u  sum_k  l_k * (u . n_k - n_k . v_k)^2

where l_k and n_k are the edge length and unit normal and v_k is the
corrected endpoint velocity of edge k taken with q as first endpoint. The
sign of n_k cancels in both the matrix and the right-hand side, so either
edge orientation may be used as long as it is consistent per term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateEdgeError, SingularSystemError
from .mesh import QuadMesh, edge_geometry
from .quadrature import QuadratureRule, corrected_endpoint_pair, corrected_endpoint_velocity

__all__ = [
    "NodalSystem",
    "assemble_nodal_system",
    "solve_nodal_system",
    "assemble_systems",
    "solve_systems",
    "reconstruct_velocities",
    "apply_boundary_constraint",
]

# Scale-invariant singularity test: det(M) <= RTOL * (trace(M)/2)^2.
SINGULARITY_RTOL = 1e-14

BOUNDARY_MODES = ("free", "slide", "pin")


@dataclass
class NodalSystem:
    """2x2 normal-equation matrix and right-hand side of one node."""

    matrix: np.ndarray  # (2, 2), symmetric positive semidefinite
    rhs: np.ndarray     # (2,)


def assemble_nodal_system(mesh: QuadMesh, q, edge_velocities) -> NodalSystem:
    """Assemble the system of node ``q`` from per-edge velocity samples.

    ``edge_velocities`` must hold one 2-vector per incident edge, ordered
    like ``mesh.node_neighbors(q)``.
    """
    neighbors = mesh.node_neighbors(q)
    edge_velocities = [np.asarray(v, dtype=float) for v in edge_velocities]
    if len(edge_velocities) != len(neighbors):
        raise ValueError(
            f"node {q} has {len(neighbors)} incident edges but "
            f"{len(edge_velocities)} velocity samples were given"
        )
    x_q = mesh.node_coords[q]
    matrix = np.zeros((2, 2))
    rhs = np.zeros(2)
    for q2, v in zip(neighbors, edge_velocities):
        geom = edge_geometry(x_q, mesh.node_coords[q2])
        n = geom.normal
        matrix += geom.length * np.outer(n, n)
        rhs += geom.length * n * (n @ v)
    return NodalSystem(matrix, rhs)


def solve_nodal_system(system: NodalSystem, node=None) -> np.ndarray:
    """Closed-form 2x2 solve; raises if the incident normals are collinear."""
    m = system.matrix
    b = system.rhs
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    tol = SINGULARITY_RTOL * (0.5 * (m[0, 0] + m[1, 1])) ** 2
    if det <= tol:
        where = "" if node is None else f" at node {node}"
        raise SingularSystemError(
            f"singular nodal system{where}: det={det:.3e}, collinear incident normals",
            node=node,
        )
    return np.array([
        (m[1, 1] * b[0] - m[0, 1] * b[1]) / det,
        (m[0, 0] * b[1] - m[1, 0] * b[0]) / det,
    ])


def _accumulate_family(field, rule, a_pts, b_pts, u_a, u_b, out_a, out_b):
    """Add one edge family's contributions into per-node accumulators.

    ``out_a``/``out_b`` are (mxx, mxy, myy, bx, by) grid views for the
    first and second endpoint of every edge in the family.
    """
    v_a, v_b = corrected_endpoint_pair(rule, field, a_pts, b_pts, u_a, u_b)
    e = b_pts - a_pts
    length = np.hypot(e[..., 0], e[..., 1])
    if not np.all(length > 0.0):
        raise DegenerateEdgeError("mesh contains a zero-length edge")
    # length-weighted left normal; its sign cancels in every product below
    ln_x = -e[..., 1]
    ln_y = e[..., 0]
    inv_l = 1.0 / length
    wxx = ln_x * ln_x * inv_l
    wxy = ln_x * ln_y * inv_l
    wyy = ln_y * ln_y * inv_l
    for (mxx, mxy, myy, bx, by), v in ((out_a, v_a), (out_b, v_b)):
        mxx += wxx
        mxy += wxy
        myy += wyy
        s = (ln_x * v[..., 0] + ln_y * v[..., 1]) * inv_l
        bx += ln_x * s
        by += ln_y * s


def assemble_systems(mesh: QuadMesh, field, rule):
    """Normal-equation matrices and right-hand sides for every node at once.

    Returns ``(matrices, rhs)`` shaped (n_nodes, 2, 2) and (n_nodes, 2).
    Edge endpoint field values are shared between the two edge families to
    avoid redundant evaluations.
    """
    rule = QuadratureRule.parse(rule)
    grid = mesh.coords_grid
    u_node = np.asarray(field(grid), dtype=float)

    shape = grid.shape[:2]
    mxx = np.zeros(shape)
    mxy = np.zeros(shape)
    myy = np.zeros(shape)
    bx = np.zeros(shape)
    by = np.zeros(shape)

    def views(rows, cols):
        return (mxx[rows, cols], mxy[rows, cols], myy[rows, cols],
                bx[rows, cols], by[rows, cols])

    sl = slice(None)
    _accumulate_family(
        field, rule,
        grid[:, :-1], grid[:, 1:], u_node[:, :-1], u_node[:, 1:],
        views(sl, slice(None, -1)), views(sl, slice(1, None)),
    )
    _accumulate_family(
        field, rule,
        grid[:-1, :], grid[1:, :], u_node[:-1, :], u_node[1:, :],
        views(slice(None, -1), sl), views(slice(1, None), sl),
    )

    n = mesh.n_nodes
    matrices = np.empty((n, 2, 2))
    matrices[:, 0, 0] = mxx.reshape(-1)
    matrices[:, 0, 1] = mxy.reshape(-1)
    matrices[:, 1, 0] = mxy.reshape(-1)
    matrices[:, 1, 1] = myy.reshape(-1)
    rhs = np.stack([bx.reshape(-1), by.reshape(-1)], axis=-1)
    return matrices, rhs


def solve_systems(matrices, rhs, positions=None) -> np.ndarray:
    """Vectorized closed-form solve of many 2x2 systems."""
    mxx = matrices[:, 0, 0]
    mxy = matrices[:, 0, 1]
    myy = matrices[:, 1, 1]
    det = mxx * myy - mxy * mxy
    tol = SINGULARITY_RTOL * (0.5 * (mxx + myy)) ** 2
    bad = det <= tol
    if np.any(bad):
        q = int(np.argmax(bad))
        where = f" at {tuple(positions[q])}" if positions is not None else ""
        raise SingularSystemError(
            f"singular nodal system at node {q}{where}: det={det[q]:.3e}",
            node=q,
            position=None if positions is None else positions[q],
        )
    out = np.empty_like(rhs)
    out[:, 0] = (myy * rhs[:, 0] - mxy * rhs[:, 1]) / det
    out[:, 1] = (mxx * rhs[:, 1] - mxy * rhs[:, 0]) / det
    return out


def reconstruct_velocities(mesh: QuadMesh, field, rule) -> np.ndarray:
    """Corrected nodal velocities for every node, (n_nodes, 2).

    Boundary nodes are solved from their 2 or 3 incident edges, whose
    normals still span the plane on rectangular grids; apply a boundary
    constraint separately if needed.
    """
    matrices, rhs = assemble_systems(mesh, field, rule)
    return solve_systems(matrices, rhs, positions=mesh.node_coords)


def apply_boundary_constraint(mesh: QuadMesh, velocities, mode) -> np.ndarray:
    """Constrain boundary-node velocities; interior nodes are never touched.

    free : return the input unchanged.
    slide: project onto the boundary tangent (zero the normal component);
           corners, belonging to two sides, are zeroed entirely.
    pin  : zero all boundary-node velocities.
    """
    if mode not in BOUNDARY_MODES:
        raise ConfigError(f"unknown boundary mode {mode!r} (expected one of {BOUNDARY_MODES})")
    if mode == "free":
        return velocities
    out = np.array(velocities, dtype=float)
    grid = out.reshape(mesh.ny + 1, mesh.nx + 1, 2)
    if mode == "slide":
        grid[:, 0, 0] = 0.0
        grid[:, -1, 0] = 0.0
        grid[0, :, 1] = 0.0
        grid[-1, :, 1] = 0.0
    else:  # pin
        grid[:, 0, :] = 0.0
        grid[:, -1, :] = 0.0
        grid[0, :, :] = 0.0
        grid[-1, :, :] = 0.0
    return out
