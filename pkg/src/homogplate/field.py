"""Node grids on the unit square, scalar fields, domain masks and discrete norms.

Fields are stored as ``(n + 1, n + 1)`` arrays indexed ``values[j, i]``, so
that row ``j`` is the ``y = j h`` line and column ``i`` the ``x = i h`` line.
Flattening in C order therefore gives row-major storage by ``(i, j)`` with
``i`` the fast index, which is also the orientation of the CSV tables.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, ShapeError


@dataclass(frozen=True)
class Grid2D:
    """Uniform node grid with ``n`` cells per side on ``[0, 1]^2``."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidConfigError(f"grid needs an integer n >= 2, got {self.n!r}")

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @property
    def nodes_per_side(self) -> int:
        return self.n + 1

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n + 1, self.n + 1)

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(x, y)`` node coordinate arrays shaped like a field."""
        t = np.arange(self.n + 1) * self.h
        y, x = np.meshgrid(t, t, indexing="ij")
        return x, y

    def index_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """Return integer ``(i, j)`` arrays shaped like a field."""
        k = np.arange(self.n + 1)
        j, i = np.meshgrid(k, k, indexing="ij")
        return i, j


def make_grid(n: int) -> Grid2D:
    return Grid2D(n)


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass
class ScalarField:
    """Real values on the nodes of a :class:`Grid2D`."""

    grid: Grid2D
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ShapeError(
                f"values of shape {self.values.shape} do not fit grid with n={self.grid.n}"
            )

    @classmethod
    def zeros(cls, grid: Grid2D) -> ScalarField:
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid2D, value: float) -> ScalarField:
        return cls(grid, np.full(grid.shape, float(value)))

    @classmethod
    def from_function(cls, grid: Grid2D, func) -> ScalarField:
        """Sample ``func(x, y)`` (vectorized) at every node."""
        x, y = grid.coordinates()
        return cls(grid, np.broadcast_to(func(x, y), grid.shape).copy())

    def at(self, i: int, j: int) -> float:
        return float(self.values[j, i])

    def copy(self) -> ScalarField:
        return ScalarField(self.grid, self.values.copy())

    def is_finite(self) -> bool:
        return bool(np.isfinite(self.values).all())

    def boundary_values(self) -> np.ndarray:
        v = self.values
        return np.concatenate([v[0, :], v[-1, :], v[1:-1, 0], v[1:-1, -1]])

    def __len__(self):
        return self.values.size


class NodeClass(enum.IntEnum):
    ACTIVE = 0
    OUTER_DIRICHLET = 1
    HOLE_DIRICHLET = 2


@dataclass
class DomainMask:
    """Per-node classification of the discrete perforated domain."""

    grid: Grid2D
    classes: np.ndarray

    def __post_init__(self):
        self.classes = np.asarray(self.classes, dtype=np.int8)
        if self.classes.shape != self.grid.shape:
            raise ShapeError("mask shape does not match grid")
        c = self.classes
        frame = np.ones(self.grid.shape, dtype=bool)
        frame[1:-1, 1:-1] = False
        if not (c[frame] == NodeClass.OUTER_DIRICHLET).all():
            raise InvalidConfigError("every frame node must be OUTER_DIRICHLET")
        if (c[~frame] == NodeClass.OUTER_DIRICHLET).any():
            raise InvalidConfigError("OUTER_DIRICHLET nodes must lie on the frame")
        if not (c == NodeClass.ACTIVE).any():
            raise InvalidConfigError("domain mask has no active node")

    @classmethod
    def unperforated(cls, grid: Grid2D) -> DomainMask:
        c = np.full(grid.shape, NodeClass.OUTER_DIRICHLET, dtype=np.int8)
        c[1:-1, 1:-1] = NodeClass.ACTIVE
        return cls(grid, c)

    @property
    def active(self) -> np.ndarray:
        return self.classes == NodeClass.ACTIVE

    @property
    def holes(self) -> np.ndarray:
        return self.classes == NodeClass.HOLE_DIRICHLET

    @property
    def dirichlet(self) -> np.ndarray:
        return self.classes != NodeClass.ACTIVE


class NormKind(str, enum.Enum):
    LINF = "linf"
    L2H = "l2h"
    H1H = "h1h"


def norm(field: ScalarField, kind: NormKind | str = NormKind.L2H) -> float:
    """Discrete norm of a field.

    ``LINF`` is the max norm, ``L2H`` the grid-weighted L2 norm
    ``sqrt(h^2 sum v^2)`` and ``H1H`` adds ``h^2`` times the squared
    forward-difference quotients over every edge of the node grid.
    """
    kind = NormKind(kind)
    v = field.values
    if not np.isfinite(v).all():
        raise ValueError("norm of a non-finite field")
    if kind is NormKind.LINF:
        return float(np.max(np.abs(v)))
    h = field.grid.h
    l2_sq = h * h * float(np.sum(v * v))
    if kind is NormKind.L2H:
        return float(np.sqrt(l2_sq))
    dx = np.diff(v, axis=1) / h
    dy = np.diff(v, axis=0) / h
    grad_sq = h * h * (float(np.sum(dx * dx)) + float(np.sum(dy * dy)))
    return float(np.sqrt(l2_sq + grad_sq))


def check_same_grid(a, b):
    if a.grid != b.grid:
        raise ShapeError(f"grid mismatch: n={a.grid.n} vs n={b.grid.n}")


def field_axpy(a: float, x: ScalarField, y: ScalarField) -> ScalarField:
    """Return ``a * x + y`` as a new field."""
    check_same_grid(x, y)
    return ScalarField(x.grid, a * x.values + y.values)


def sine_mode(grid: Grid2D) -> ScalarField:
    """The lowest discrete Dirichlet eigenfunction ``sin(pi x) sin(pi y)``."""
    return ScalarField.from_function(grid, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))


def smallest_eigenvalue(grid: Grid2D) -> float:
    """Smallest eigenvalue of ``-Delta_h`` with zero Dirichlet data: ``(8/h^2) sin^2(pi h/2)``."""
    h = grid.h
    return 8.0 / (h * h) * np.sin(np.pi * h / 2.0) ** 2


# The eight symmetries of the square acting on field arrays.
SQUARE_SYMMETRIES = (
    ("identity", lambda a: a),
    ("rot90", lambda a: np.rot90(a, 1)),
    ("rot180", lambda a: np.rot90(a, 2)),
    ("rot270", lambda a: np.rot90(a, 3)),
    ("flip_x", lambda a: a[:, ::-1]),
    ("flip_y", lambda a: a[::-1, :]),
    ("transpose", lambda a: a.T),
    ("anti_transpose", lambda a: np.rot90(a, 2).T),
)
