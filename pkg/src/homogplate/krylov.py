"""Matrix-free conjugate gradient on full node arrays."""

from __future__ import annotations

import numpy as np

from .errors import NonConvergenceError


def conjugate_gradient(apply, b, rel_tol, max_iter, diag=None):
    """Solve ``A x = b`` for symmetric positive definite ``A`` given as ``apply(x)``.

    ``b`` and the iterates are arrays of any shape; entries the operator
    ignores must be zero in ``b`` and stay zero under ``apply``. With
    ``diag`` given, Jacobi preconditioning is used. Stops when
    ``|r|_2 <= rel_tol |b|_2``. Returns ``(x, iterations, relative_residual)``.
    """
    x = np.zeros_like(b)
    bnorm = float(np.sqrt(np.vdot(b, b)))
    if bnorm == 0.0:
        return x, 0, 0.0
    r = b.copy()
    z = r / diag if diag is not None else r
    p = z.copy()
    rz = float(np.vdot(r, z))
    rnorm = bnorm
    for it in range(1, max_iter + 1):
        ap = apply(p)
        alpha = rz / float(np.vdot(p, ap))
        x += alpha * p
        r -= alpha * ap
        rnorm = float(np.sqrt(np.vdot(r, r)))
        if rnorm <= rel_tol * bnorm:
            return x, it, rnorm / bnorm
        z = r / diag if diag is not None else r
        rz_new = float(np.vdot(r, z))
        p *= rz_new / rz
        p += z
        rz = rz_new
    raise NonConvergenceError(
        f"conjugate gradient stalled at relative residual {rnorm / bnorm:.3e} "
        f"after {max_iter} iterations",
        {"iterations": max_iter, "relative_residual": rnorm / bnorm},
    )
