"""Geometric multigrid for the 5-point Poisson problem ``Delta_h G = F``, ``G = 0`` on the frame.

V(pre, post) cycles with red-black Gauss-Seidel smoothing, full-weighting
restriction and bilinear prolongation on node-centred grids whose cell
count is a power of two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, NonConvergenceError
from .field import ScalarField, is_power_of_two

# Multiplier on the rounding floor of the 5-point residual; see _residual_floor.
FLOOR_FACTOR = 8.0
COARSE_TOL = 1e-14
COARSE_MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class MgConfig:
    pre_smooth: int = 2
    post_smooth: int = 2
    max_cycles: int = 50
    target_residual_linf: float = 1e-12
    coarsest_n: int = 2

    def __post_init__(self):
        if self.pre_smooth < 0 or self.post_smooth < 0:
            raise InvalidConfigError("smoothing counts must be non-negative")
        if self.pre_smooth + self.post_smooth < 1:
            raise InvalidConfigError("at least one smoothing sweep per cycle is required")
        if self.coarsest_n < 2 or not is_power_of_two(self.coarsest_n):
            raise InvalidConfigError("coarsest_n must be a power of two >= 2")
        if not self.target_residual_linf > 0:
            raise InvalidConfigError("target_residual_linf must be positive")
        if self.max_cycles < 1:
            raise InvalidConfigError("max_cycles must be >= 1")


def _laplacian(u: np.ndarray, h: float) -> np.ndarray:
    out = np.zeros_like(u)
    out[1:-1, 1:-1] = (
        u[1:-1, 2:] + u[1:-1, :-2] + u[2:, 1:-1] + u[:-2, 1:-1] - 4.0 * u[1:-1, 1:-1]
    ) / (h * h)
    return out


def laplacian_apply(u: ScalarField) -> ScalarField:
    """5-point Laplacian at interior nodes, zero on the frame."""
    return ScalarField(u.grid, _laplacian(u.values, u.grid.h))


def _residual(u: np.ndarray, f: np.ndarray, h: float) -> np.ndarray:
    r = f - _laplacian(u, h)
    r[0, :] = r[-1, :] = r[:, 0] = r[:, -1] = 0.0
    return r


def smooth(u: np.ndarray, f: np.ndarray, h: float, sweeps: int = 1) -> np.ndarray:
    """Red-black Gauss-Seidel sweeps for ``Delta_h u = f``, in place.

    Red nodes have ``i + j`` even. Frame values of ``u`` are left untouched.
    """
    n = u.shape[0] - 1
    h2 = h * h
    colors = (((1, 1), (2, 2)), ((1, 2), (2, 1)))
    for _ in range(sweeps):
        for color in colors:
            for j0, i0 in color:
                if j0 >= n or i0 >= n:
                    continue
                u[j0:n:2, i0:n:2] = 0.25 * (
                    u[j0 - 1 : n - 1 : 2, i0:n:2]
                    + u[j0 + 1 : n + 1 : 2, i0:n:2]
                    + u[j0:n:2, i0 - 1 : n - 1 : 2]
                    + u[j0:n:2, i0 + 1 : n + 1 : 2]
                    - h2 * f[j0:n:2, i0:n:2]
                )
    return u


def restrict(r: np.ndarray) -> np.ndarray:
    """Full weighting onto the grid with half as many cells.

    Interior coarse nodes get the 1-2-1 tensor stencil; frame nodes are injected.
    """
    n = r.shape[0] - 1
    if n % 2:
        raise InvalidConfigError("restriction needs an even cell count")
    c = r[::2, ::2].copy()
    c[1:-1, 1:-1] = (
        4.0 * r[2:-1:2, 2:-1:2]
        + 2.0 * (r[1:-2:2, 2:-1:2] + r[3::2, 2:-1:2] + r[2:-1:2, 1:-2:2] + r[2:-1:2, 3::2])
        + (r[1:-2:2, 1:-2:2] + r[1:-2:2, 3::2] + r[3::2, 1:-2:2] + r[3::2, 3::2])
    ) / 16.0
    return c


def prolong(e: np.ndarray) -> np.ndarray:
    """Bilinear interpolation onto the grid with twice as many cells."""
    nc = e.shape[0] - 1
    out = np.empty((2 * nc + 1, 2 * nc + 1))
    out[::2, ::2] = e
    out[::2, 1::2] = 0.5 * (e[:, :-1] + e[:, 1:])
    out[1::2, ::2] = 0.5 * (e[:-1, :] + e[1:, :])
    out[1::2, 1::2] = 0.25 * (e[:-1, :-1] + e[:-1, 1:] + e[1:, :-1] + e[1:, 1:])
    return out


def coarse_solve(f: np.ndarray, h: float, tol: float = COARSE_TOL) -> np.ndarray:
    """Relax on the coarsest grid until the residual drops below ``tol * max(1, |f|)``."""
    u = np.zeros_like(f)
    scale = max(1.0, float(np.max(np.abs(f))))
    for _ in range(COARSE_MAX_SWEEPS):
        smooth(u, f, h)
        if np.max(np.abs(_residual(u, f, h))) <= max(tol * scale, _residual_floor(u, h)):
            return u
    raise NonConvergenceError("coarse-grid relaxation did not converge")


def _residual_floor(u: np.ndarray, h: float) -> float:
    # Evaluating (sum of neighbours - 4u)/h^2 in double precision carries an
    # error of a few ulp(|u|) / h^2 even at the exact discrete solution.
    return FLOOR_FACTOR * np.finfo(float).eps * float(np.max(np.abs(u))) * 8.0 / (h * h)


def v_cycle(u: np.ndarray, f: np.ndarray, h: float, cfg: MgConfig) -> np.ndarray:
    """One V-cycle for ``Delta_h u = f``, updating ``u`` in place."""
    n = u.shape[0] - 1
    if n <= cfg.coarsest_n:
        u[...] = coarse_solve(f, h)
        return u
    smooth(u, f, h, cfg.pre_smooth)
    rc = restrict(_residual(u, f, h))
    ec = np.zeros_like(rc)
    v_cycle(ec, rc, 2.0 * h, cfg)
    u += prolong(ec)
    smooth(u, f, h, cfg.post_smooth)
    return u


def mg_solve(F: ScalarField, cfg: MgConfig | None = None, initial: ScalarField | None = None):
    """Solve ``Delta_h G = F`` with ``G = 0`` on the frame.

    Returns ``(G, residual_history)`` where ``residual_history[k]`` is the
    max-norm residual after cycle ``k + 1``. Iteration stops once the
    residual is at most ``target_residual_linf * max(1, |F|_inf)``, or at
    the double-precision rounding floor of the stencil when that is larger
    (fine grids cannot resolve residuals below ``~eps |G| / h^2``).

    ``initial`` is an optional starting guess; its frame values are ignored.
    """
    cfg = cfg or MgConfig()
    grid = F.grid
    n = grid.n
    if not is_power_of_two(n):
        raise InvalidConfigError(f"multigrid needs a power-of-two cell count, got n={n}")
    if n < cfg.coarsest_n:
        raise InvalidConfigError(f"n={n} is below coarsest_n={cfg.coarsest_n}")
    if not F.is_finite():
        raise InvalidConfigError("right-hand side is not finite")
    h = grid.h
    f = F.values.copy()
    f[0, :] = f[-1, :] = f[:, 0] = f[:, -1] = 0.0
    u = np.zeros_like(f) if initial is None else initial.values.copy()
    u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.0
    tol = cfg.target_residual_linf * max(1.0, float(np.max(np.abs(f))))

    history: list[float] = []
    if float(np.max(np.abs(_residual(u, f, h)))) <= tol:
        return ScalarField(grid, u), history
    for _ in range(cfg.max_cycles):
        v_cycle(u, f, h, cfg)
        res = float(np.max(np.abs(_residual(u, f, h))))
        history.append(res)
        if res <= max(tol, _residual_floor(u, h)):
            return ScalarField(grid, u), history
    raise NonConvergenceError(
        f"multigrid did not reach residual {tol:.3e} in {cfg.max_cycles} cycles "
        f"(last {history[-1]:.3e})",
        history,
    )
