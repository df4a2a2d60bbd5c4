"""Exception types shared across the package."""


class LagmeshError(Exception):
    """Base class for all lagmesh errors."""


class ConfigError(LagmeshError):
    """Invalid or inconsistent configuration or argument values."""


class DegenerateEdgeError(LagmeshError):
    """Edge or segment endpoints coincide."""


class DegenerateIntervalError(LagmeshError):
    """Quadrature interval has nonpositive length."""


class SingularSystemError(LagmeshError):
    """Nodal matrix is numerically singular (collinear incident normals)."""

    def __init__(self, message, node=None, position=None):
        super().__init__(message)
        self.node = node
        self.position = None if position is None else tuple(position)


class TanglingError(LagmeshError):
    """A cell has nonpositive signed area (inverted or collapsed)."""

    def __init__(self, message, cell=None, stage=None):
        super().__init__(message)
        self.cell = cell
        self.stage = stage


class TimeStepCollapseError(LagmeshError):
    """Time-step controller produced a nonpositive step."""


class TopologyMismatchError(LagmeshError):
    """Two states do not share the same mesh topology."""


class StepLimitError(LagmeshError):
    """Simulation exceeded the maximum allowed number of steps."""


class OrderUndefinedError(LagmeshError):
    """Convergence order cannot be computed (zero error entries)."""
