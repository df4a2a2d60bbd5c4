"""Analytic velocity fields for the vortex test problems.

Every field maps an (..., 2) position array to an (..., 2) velocity array,
so it can be evaluated on single points, edge batches, or whole coordinate
grids alike.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "IsentropicVortex",
    "TaylorGreen",
    "Constant",
    "Rotation",
    "numerical_divergence",
]


class IsentropicVortex:
    """Swirl (-y, x) scaled by (5 / 2pi) * exp((1 - x^2 - y^2) / 2).

    Divergence-free; decays super-exponentially away from the unit circle,
    so a [-10, 10]^2 domain boundary sees effectively zero velocity.
    """

    def __call__(self, xy):
        xy = np.asarray(xy, dtype=float)
        x = xy[..., 0]
        y = xy[..., 1]
        amp = (5.0 / (2.0 * np.pi)) * np.exp(0.5 * (1.0 - x * x - y * y))
        return np.stack([-y * amp, x * amp], axis=-1)


class TaylorGreen:
    """(sin(pi x) cos(pi y), -cos(pi x) sin(pi y)); divergence-free on [0, 1]^2.

    The normal component vanishes on all four sides of the unit square.
    """

    def __call__(self, xy):
        xy = np.asarray(xy, dtype=float)
        px = np.pi * xy[..., 0]
        py = np.pi * xy[..., 1]
        return np.stack([np.sin(px) * np.cos(py), -np.cos(px) * np.sin(py)], axis=-1)


class Constant:
    """Uniform velocity field."""

    def __init__(self, ux, uy):
        self.value = np.array([float(ux), float(uy)])

    def __call__(self, xy):
        xy = np.asarray(xy, dtype=float)
        return np.broadcast_to(self.value, xy.shape).copy()


class Rotation:
    """Rigid rotation about the origin, u = omega * (-y, x)."""

    def __init__(self, omega=1.0):
        self.omega = float(omega)

    def __call__(self, xy):
        xy = np.asarray(xy, dtype=float)
        return self.omega * np.stack([-xy[..., 1], xy[..., 0]], axis=-1)


def numerical_divergence(field, x, y, eps):
    """Central-difference divergence of ``field`` at (x, y).

    Accepts scalars or broadcastable arrays; second-order in ``eps``.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xp = np.stack(np.broadcast_arrays(x + eps, y), axis=-1)
    xm = np.stack(np.broadcast_arrays(x - eps, y), axis=-1)
    yp = np.stack(np.broadcast_arrays(x, y + eps), axis=-1)
    ym = np.stack(np.broadcast_arrays(x, y - eps), axis=-1)
    dudx = (field(xp)[..., 0] - field(xm)[..., 0]) / (2.0 * eps)
    dvdy = (field(yp)[..., 1] - field(ym)[..., 1]) / (2.0 * eps)
    div = dudx + dvdy
    return float(div) if div.ndim == 0 else div
