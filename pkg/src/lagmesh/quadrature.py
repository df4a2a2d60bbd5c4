"""Edge quadrature and area-conservative endpoint corrections.

Two Gauss-type segment rules of algebraic precision 3 are supported. Both
feed the same endpoint correction: replace the velocity profile along a
segment by the straight line with the same endpoint slope and the same
integral, which shifts both endpoint values by the single constant

    delta_s = S_target / (b - a) - (v(a) + v(b)) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ConfigError, DegenerateEdgeError, DegenerateIntervalError

__all__ = [
    "QuadratureRule",
    "ConservativeLinearization",
    "linearize_conservative",
    "segment_integral",
    "corrected_endpoint_velocity",
    "corrected_endpoint_pair",
]

_INV_2SQRT3 = 0.5 / math.sqrt(3.0)


class QuadratureRule(Enum):
    """Segment quadrature rules, both exact for cubics."""

    LOBATTO3 = "lobatto"
    LEGENDRE2 = "legendre"

    @classmethod
    def parse(cls, name) -> "QuadratureRule":
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            raise ConfigError(
                f"unknown quadrature rule {name!r} (expected 'lobatto' or 'legendre')"
            ) from None


@dataclass
class ConservativeLinearization:
    """Endpoint values of the slope- and integral-preserving line."""

    v_a_prime: float
    v_b_prime: float
    delta_s: float
    s_target: float


def linearize_conservative(v_a, v_b, s_target, a, b) -> ConservativeLinearization:
    """Shift both endpoint values so the trapezoid integral equals ``s_target``."""
    if not b > a:
        raise DegenerateIntervalError(f"interval [{a}, {b}] has nonpositive length")
    delta_s = s_target / (b - a) - 0.5 * (v_a + v_b)
    return ConservativeLinearization(v_a + delta_s, v_b + delta_s, delta_s, s_target)


def segment_integral(rule, f, a, b) -> float:
    """Integral of ``f`` over ``[a, b]`` by the given rule (exact for cubics)."""
    rule = QuadratureRule.parse(rule)
    if not b > a:
        raise DegenerateIntervalError(f"interval [{a}, {b}] has nonpositive length")
    h = b - a
    mid = 0.5 * (a + b)
    if rule is QuadratureRule.LOBATTO3:
        return h * (f(a) + 4.0 * f(mid) + f(b)) / 6.0
    d = h * _INV_2SQRT3
    return h * (f(mid - d) + f(mid + d)) / 2.0


def corrected_endpoint_pair(rule, field, a_pts, b_pts, u_a=None, u_b=None):
    """Corrected velocities at both endpoints of a batch of segments.

    ``a_pts`` and ``b_pts`` are (..., 2) arrays of segment endpoints;
    ``u_a``/``u_b`` may carry precomputed endpoint field values. Returns
    the pair of corrected endpoint velocities, each equal to the raw
    endpoint velocity plus the componentwise area correction of the
    segment.
    """
    rule = QuadratureRule.parse(rule)
    a_pts = np.asarray(a_pts, dtype=float)
    b_pts = np.asarray(b_pts, dtype=float)
    if u_a is None:
        u_a = np.asarray(field(a_pts), dtype=float)
    if u_b is None:
        u_b = np.asarray(field(b_pts), dtype=float)
    if rule is QuadratureRule.LOBATTO3:
        u_m = np.asarray(field(0.5 * (a_pts + b_pts)), dtype=float)
        v_a = (2.0 * u_a + 2.0 * u_m - u_b) / 3.0
        v_b = (2.0 * u_b + 2.0 * u_m - u_a) / 3.0
    else:
        mid = 0.5 * (a_pts + b_pts)
        d = (b_pts - a_pts) * _INV_2SQRT3
        s = np.asarray(field(mid - d), dtype=float) + np.asarray(field(mid + d), dtype=float)
        v_a = 0.5 * (u_a + s - u_b)
        v_b = 0.5 * (u_b + s - u_a)
    return v_a, v_b


def corrected_endpoint_velocity(rule, field, x_q, x_qp) -> np.ndarray:
    """Corrected velocity at ``x_q`` for the segment toward ``x_qp``."""
    x_q = np.asarray(x_q, dtype=float)
    x_qp = np.asarray(x_qp, dtype=float)
    if np.hypot(*(x_qp - x_q)) == 0.0:
        raise DegenerateEdgeError(f"degenerate segment at {tuple(x_q)}")
    v_a, _ = corrected_endpoint_pair(rule, field, x_q, x_qp)
    return v_a
