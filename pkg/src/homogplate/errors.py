"""Exception types shared by the solvers and the command line."""


class InvalidConfigError(ValueError):
    """A parameter is outside its legal range."""


class ShapeError(ValueError):
    """Two fields (or a field and a mask) live on different grids."""


class GeometryError(ValueError):
    """The perforation geometry is inconsistent (e.g. holes leave their cells)."""


class UnderResolvedGeometryError(GeometryError):
    """The grid is too coarse to represent the holes."""


class NonConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap before reaching tolerance.

    ``history`` carries whatever convergence record the solver kept
    (a residual list or an :class:`~homogplate.homogenized.IterationTrace`).
    """

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history
