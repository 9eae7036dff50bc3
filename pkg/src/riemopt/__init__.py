"""Geodesic optimization on the unit sphere and the rotation group.

Three solvers (steepest descent, Newton, conjugate gradient) run over a
small manifold contract with closed-form geodesics and parallel
translation.  Applications: extreme symmetric eigenpairs via the Rayleigh
quotient, and matrix diagonalization via trace objectives on the
isospectral orbit of the rotation group.
"""

from . import errors
from .core import (
    ConvergenceReport,
    GeodesicObjective,
    IterationTrace,
    Manifold,
    STAGNATION_FLOOR,
    estimate_order,
    longest_decreasing_run,
)
from .eigensolvers import EigenResult, cg_extreme_eigen, newton_rayleigh, rqi
from .rotation import (
    BrockettObjective,
    BrockettProblem,
    JacobiObjective,
    JacobiProblem,
    SpecialOrthogonal,
    brockett_gradient,
    brockett_hessian_operator,
    brockett_newton_direction,
    brockett_step_estimate,
    brockett_third_component,
    brockett_value,
    jacobi_gradient,
    jacobi_hessian_operator,
    jacobi_newton_direction,
    jacobi_value,
    skew_exp,
    so_geodesic,
    so_transport,
)
from .solvers import (
    LineSearchResult,
    SolverConfig,
    conjugate_gradient,
    line_minimize_geodesic,
    newton,
    steepest_descent,
)
from .sphere import (
    RayleighObjective,
    RayleighProblem,
    Sphere,
    rayleigh_gradient,
    rayleigh_hessian_apply,
    rayleigh_line_max,
    rayleigh_newton_step,
    rayleigh_value,
    solve_projected_linear,
    sphere_distance,
    sphere_exp,
    sphere_log,
    sphere_transport,
)

__all__ = [
    "BrockettObjective",
    "BrockettProblem",
    "ConvergenceReport",
    "EigenResult",
    "GeodesicObjective",
    "IterationTrace",
    "JacobiObjective",
    "JacobiProblem",
    "LineSearchResult",
    "Manifold",
    "RayleighObjective",
    "RayleighProblem",
    "STAGNATION_FLOOR",
    "SolverConfig",
    "SpecialOrthogonal",
    "Sphere",
    "brockett_gradient",
    "brockett_hessian_operator",
    "brockett_newton_direction",
    "brockett_step_estimate",
    "brockett_third_component",
    "brockett_value",
    "cg_extreme_eigen",
    "conjugate_gradient",
    "errors",
    "estimate_order",
    "jacobi_gradient",
    "jacobi_hessian_operator",
    "jacobi_newton_direction",
    "jacobi_value",
    "line_minimize_geodesic",
    "longest_decreasing_run",
    "newton",
    "newton_rayleigh",
    "rayleigh_gradient",
    "rayleigh_hessian_apply",
    "rayleigh_line_max",
    "rayleigh_newton_step",
    "rayleigh_value",
    "rqi",
    "skew_exp",
    "so_geodesic",
    "so_transport",
    "solve_projected_linear",
    "sphere_distance",
    "sphere_exp",
    "sphere_log",
    "sphere_transport",
    "steepest_descent",
]

__version__ = "0.1.0"
