"""The plate with a periodic lattice of small holes held at the boundary temperature.

Holes of radius ``exp(-c0 / eps^2)`` sit at the centres of the ``m x m``
cells of side ``eps = 1/m``. On the node grid a node belongs to a hole when
its distance to the hole centre is at most the radius (staircase boundary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GeometryError, InvalidConfigError, UnderResolvedGeometryError
from .field import DomainMask, Grid2D, NodeClass, ScalarField, check_same_grid
from .krylov import conjugate_gradient

# A hole must span at least this many grid spacings in radius.
MIN_RADIUS_IN_CELLS = 3.0


def parse_epsilon(value) -> Fraction:
    """Accept ``Fraction``, ``"1/3"`` or an exact reciprocal float such as ``0.5``.

    The string form must be an exact fraction; decimal strings are rejected.
    """
    if isinstance(value, Fraction):
        eps = value
    elif isinstance(value, str):
        text = value.strip()
        if "/" not in text:
            raise InvalidConfigError(f"epsilon must be given as a fraction like 1/3, got {value!r}")
        try:
            eps = Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidConfigError(f"cannot parse epsilon {value!r}") from exc
    else:
        eps = Fraction(value).limit_denominator(10**6)
        if float(eps) != float(value):
            raise InvalidConfigError(f"epsilon {value!r} is not a reciprocal integer")
    if not 0 < eps < 1 or eps.numerator != 1:
        raise InvalidConfigError(f"1/epsilon must be an integer >= 2, got epsilon={eps}")
    return eps


@dataclass(frozen=True)
class PerforationSpec:
    """Lattice of ``m^2`` holes; ``m = 0`` is the unperforated plate."""

    m: int
    c0: float

    @property
    def epsilon(self) -> float:
        return 1.0 / self.m if self.m else float("inf")

    @property
    def radius(self) -> float:
        if self.m == 0:
            return 0.0
        return math.exp(-self.c0 * self.m * self.m)

    @property
    def count(self) -> int:
        return self.m * self.m

    @property
    def centers(self) -> list[tuple[float, float]]:
        m = self.m
        return [((i + 0.5) / m, (j + 0.5) / m) for j in range(m) for i in range(m)]

    @classmethod
    def empty(cls) -> PerforationSpec:
        return cls(m=0, c0=1.0)


def make_perforation(epsilon, c0: float) -> PerforationSpec:
    eps = parse_epsilon(epsilon)
    if not c0 > 0:
        raise InvalidConfigError(f"c0 must be positive, got {c0!r}")
    spec = PerforationSpec(m=eps.denominator, c0=float(c0))
    if not spec.radius < float(eps) / 2:
        raise GeometryError(
            f"hole radius {spec.radius:.6g} does not fit in cells of size {float(eps):.6g}"
        )
    return spec


def build_mask(spec: PerforationSpec, grid: Grid2D) -> DomainMask:
    mask = DomainMask.unperforated(grid)
    if spec.m == 0:
        return mask
    h = grid.h
    if spec.radius < MIN_RADIUS_IN_CELLS * h:
        raise UnderResolvedGeometryError(
            f"hole radius {spec.radius:.4g} is below {MIN_RADIUS_IN_CELLS:g}h = "
            f"{MIN_RADIUS_IN_CELLS * h:.4g}; refine the grid"
        )
    x, y = grid.coordinates()
    # Distance to the nearest lattice centre, computed per cell in integer-free form.
    m = spec.m
    cx = (np.clip(np.floor(x * m), 0, m - 1) + 0.5) / m
    cy = (np.clip(np.floor(y * m), 0, m - 1) + 0.5) / m
    # Nodes on a cell edge are closer to the neighbour's centre than any radius < eps/2
    # allows, so picking either adjacent cell gives the same classification.
    inside = (x - cx) ** 2 + (y - cy) ** 2 <= spec.radius**2
    classes = mask.classes.copy()
    classes[inside & (classes == NodeClass.ACTIVE)] = NodeClass.HOLE_DIRICHLET
    return DomainMask(grid, classes)


def masked_laplacian_operator(mask: DomainMask):
    """``v -> h^2 (-Delta_h v)`` restricted to active nodes, Dirichlet nodes fixed at 0."""
    active = mask.active.astype(np.float64)

    def apply(v):
        out = np.zeros_like(v)
        c = out[1:-1, 1:-1]
        np.multiply(v[1:-1, 1:-1], 4.0, out=c)
        c -= v[1:-1, 2:]
        c -= v[1:-1, :-2]
        c -= v[2:, 1:-1]
        c -= v[:-2, 1:-1]
        out *= active
        return out

    return apply


def solve_perforated(
    spec: PerforationSpec,
    grid: Grid2D,
    f: ScalarField,
    t_boundary: float,
    rel_tol: float = 1e-10,
    jacobi: bool = False,
    mask: DomainMask | None = None,
) -> ScalarField:
    """Solve ``-Delta_h U = f`` on active nodes with ``U = T`` on frame and hole nodes."""
    if f.grid != grid:
        raise InvalidConfigError("source field lives on a different grid")
    if not rel_tol > 0:
        raise InvalidConfigError("rel_tol must be positive")
    mask = mask if mask is not None else build_mask(spec, grid)
    active = mask.active
    b = np.where(active, grid.h**2 * f.values, 0.0)
    diag = np.where(active, 4.0, 1.0) if jacobi else None
    cap = 10 * int(active.sum())
    v, _, _ = conjugate_gradient(masked_laplacian_operator(mask), b, rel_tol, cap, diag)
    u = np.where(active, v + t_boundary, t_boundary)
    return ScalarField(grid, u)


def extend_into_holes(u: ScalarField, mask: DomainMask, fill: float) -> ScalarField:
    """Replace hole-node values by ``fill``; frame and active nodes are kept."""
    check_same_grid(u, mask)
    return ScalarField(u.grid, np.where(mask.holes, float(fill), u.values))
