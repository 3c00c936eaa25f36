"""Third-order active flux solver for 2D hyperbolic conservation laws."""

from .errors import ConfigError, NumericalStateError
from .mesh import FAMILIES, DofField, Grid, allocate_dofs, build_grid, lincomb
from .equations import SPLITTINGS, Advection, Burgers, Euler
from .limiting_average import LimiterConfig
from .problems import make_problem, problem_names
from .timeloop import RunReport, StepControl, run
from .output import interleave, write_solution

__all__ = [
    "ConfigError",
    "NumericalStateError",
    "FAMILIES",
    "DofField",
    "Grid",
    "allocate_dofs",
    "build_grid",
    "lincomb",
    "SPLITTINGS",
    "Advection",
    "Burgers",
    "Euler",
    "LimiterConfig",
    "make_problem",
    "problem_names",
    "RunReport",
    "StepControl",
    "run",
    "interleave",
    "write_solution",
]
