"""The homogenized plate problem ``-Delta U + mu U = f + mu T`` with ``U = T`` on the frame.

Writing ``U = G + T`` turns it into ``-Delta_h G + mu G = f`` with ``G = 0``
on the frame, which is solved two independent ways: by the fixed-point
iteration ``G_{k+1} = mg_solve(mu G_k - f)`` from ``G_0 = 0`` and by
conjugate gradient on the assembled operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidConfigError, NonConvergenceError
from .field import Grid2D, ScalarField, field_axpy, is_power_of_two
from .krylov import conjugate_gradient
from .multigrid import MgConfig, mg_solve


def mu_from_c0(c0: float) -> float:
    """Absorption coefficient produced by holes of radius ``exp(-c0 / eps^2)``."""
    if not c0 > 0:
        raise InvalidConfigError(f"c0 must be positive, got {c0!r}")
    return math.pi / (2.0 * c0)


@dataclass(frozen=True)
class HomogenizedProblem:
    c0: float
    t_boundary: float
    f: ScalarField
    mu_override: float | None = None

    def __post_init__(self):
        if not self.c0 > 0:
            raise InvalidConfigError(f"c0 must be positive, got {self.c0!r}")
        if self.mu_override is not None and self.mu_override < 0:
            raise InvalidConfigError("mu must be non-negative")
        if not math.isfinite(self.t_boundary):
            raise InvalidConfigError("boundary temperature must be finite")

    @property
    def mu(self) -> float:
        # mu_override exists for the mu = 0 baseline and calibration runs.
        if self.mu_override is not None:
            return float(self.mu_override)
        return mu_from_c0(self.c0)

    @property
    def grid(self) -> Grid2D:
        return self.f.grid

    @classmethod
    def with_mu(cls, mu: float, t_boundary: float, f: ScalarField) -> HomogenizedProblem:
        """Build a problem from ``mu`` directly; ``c0`` is back-computed when ``mu > 0``."""
        c0 = math.pi / (2.0 * mu) if mu > 0 else 1.0
        return cls(c0=c0, t_boundary=t_boundary, f=f, mu_override=None if mu > 0 else 0.0)


@dataclass
class IterationTrace:
    """Successive-iterate distances ``delta_k = |G_{k+1} - G_k|_2`` of the fixed-point scheme."""

    deltas: list[float] = field(default_factory=list)
    converged: bool = False
    stop_tol: float = float("nan")

    @property
    def iterations(self) -> int:
        return len(self.deltas)

    @property
    def final_ratio(self) -> float:
        if len(self.deltas) < 3 or self.deltas[-2] == 0.0:
            return float("nan")
        return self.deltas[-1] / self.deltas[-2]

    def ratios(self) -> list[float]:
        d = self.deltas
        return [d[k + 1] / d[k] for k in range(len(d) - 1) if d[k] > 0]


def default_stop_tol(f: ScalarField) -> float:
    return 1e-10 * max(1.0, float(np.max(np.abs(f.values))))


def fixed_point_solve(
    p: HomogenizedProblem,
    mg: MgConfig | None = None,
    stop_tol: float | None = None,
    max_iter: int = 200,
):
    """Iterate ``G_{k+1} = mg_solve(mu G_k - f)`` from ``G_0 = 0``.

    Stops at the first ``k`` with ``|G_{k+1} - G_k|_2 <= stop_tol`` (plain
    Euclidean norm over all nodes). Each inner solve is warm-started from
    the previous iterate; this changes the cost, not the fixed point.
    Returns ``(G, trace)``.
    """
    mg = mg or MgConfig()
    grid = p.grid
    if not is_power_of_two(grid.n):
        raise InvalidConfigError(f"fixed-point solve needs a power-of-two n, got {grid.n}")
    if stop_tol is None:
        stop_tol = default_stop_tol(p.f)
    if not stop_tol > 0:
        raise InvalidConfigError("stop_tol must be positive")
    mu = p.mu
    minus_f = ScalarField(grid, -p.f.values)
    g = ScalarField.zeros(grid)
    trace = IterationTrace(stop_tol=stop_tol)
    for _ in range(max_iter):
        rhs = field_axpy(mu, g, minus_f)
        g_next, _ = mg_solve(rhs, mg, initial=g)
        delta = float(np.linalg.norm(g_next.values - g.values))
        trace.deltas.append(delta)
        g = g_next
        if delta <= stop_tol:
            trace.converged = True
            return g, trace
    raise NonConvergenceError(
        f"fixed-point iteration did not reach delta <= {stop_tol:.3e} in {max_iter} steps",
        trace,
    )


def helmholtz_cg_solve(p: HomogenizedProblem, rel_tol: float = 1e-12, jacobi: bool = False):
    """Conjugate-gradient solution of ``(-Delta_h + mu) G = f`` on interior nodes, ``G = 0`` on the frame."""
    mu = p.mu
    if mu < 0:
        raise InvalidConfigError("CG oracle needs mu >= 0")
    grid = p.grid
    h2 = grid.h**2

    def apply(v):
        out = np.zeros_like(v)
        out[1:-1, 1:-1] = (4.0 + mu * h2) * v[1:-1, 1:-1] - (
            v[1:-1, 2:] + v[1:-1, :-2] + v[2:, 1:-1] + v[:-2, 1:-1]
        )
        return out

    # Scaled by h^2 so entries are O(1); the relative residual is unchanged.
    b = np.zeros(grid.shape)
    b[1:-1, 1:-1] = h2 * p.f.values[1:-1, 1:-1]
    diag = np.full(grid.shape, 4.0 + mu * h2) if jacobi else None
    cap = 10 * (grid.n - 1) ** 2
    x, _, _ = conjugate_gradient(apply, b, rel_tol, cap, diag)
    return ScalarField(grid, x)


def assemble_temperature(G: ScalarField, t_boundary: float) -> ScalarField:
    """``U = G + T``; frame values are set to ``T`` exactly."""
    if not G.is_finite():
        raise InvalidConfigError("G is not finite")
    u = G.values + t_boundary
    u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = t_boundary
    return ScalarField(G.grid, u)


def solve_homogenized(
    p: HomogenizedProblem,
    mg: MgConfig | None = None,
    stop_tol: float | None = None,
    max_iter: int = 200,
):
    """Fixed-point solve followed by ``U = G + T``. Returns ``(U, G, trace)``."""
    G, trace = fixed_point_solve(p, mg, stop_tol, max_iter)
    return assemble_temperature(G, p.t_boundary), G, trace


__all__ = [
    "HomogenizedProblem",
    "IterationTrace",
    "assemble_temperature",
    "default_stop_tol",
    "fixed_point_solve",
    "helmholtz_cg_solve",
    "mu_from_c0",
    "solve_homogenized",
]
