"""Desk-scale convergence experiments with CSV traces and order reports.

Four experiment families:

* ``fig1``  — extremization of the Rayleigh quotient on the sphere,
  ``Q = diag(n, ..., 1)``, error measured as the angle between the iterate
  and the top eigenvector axis;
* ``fig2``  — ascent of ``tr(T^T Q T N)`` on the rotation group with a
  seeded spectrum, error measured as the distance of ``H = T^T Q T`` from
  its similarly-ordered eigenvalue diagonal;
* ``jacobi`` — Newton diagonalization driving the off-diagonal mass of a
  conjugated symmetric matrix to zero;
* ``fd-check`` — finite-difference verification of every analytic gradient
  and Hessian form.

Each run is reproducible from its integer seed (numpy default generator,
PCG64) and emits ``<out>/<experiment>-<method>-<seed>.csv`` plus a
key-value ``.report.txt``.  Floats are written with 17 significant digits,
which round-trips doubles exactly.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from .core import ConvergenceReport, IterationTrace, estimate_order, longest_decreasing_run
from .errors import OrderFitError, SolverError, ToleranceBreached
from .eigensolvers import cg_extreme_eigen, newton_rayleigh, rqi
from .fdcheck import brockett_family_check, jacobi_family_check, rayleigh_family_check
from .rotation import BrockettObjective, JacobiObjective, so_geodesic
from .sampling import (
    random_rotation,
    random_unit_skew,
    random_unit_tangent,
    random_unit_vector,
    rng_from_seed,
)
from .solvers import SolverConfig, conjugate_gradient, newton, steepest_descent
from .sphere import RayleighObjective

FD_GRAD_TARGET = 1e-6
FD_HESS_TARGET = 1e-5

_METHODS = {
    "fig1": ("sd", "cg", "newton", "rqi", "newton-rq"),
    "fig2": ("sd", "cg", "newton"),
    "jacobi": ("newton",),
    "fd-check": ("all",),
}


@dataclass
class ExperimentSpec:
    experiment: str
    n: int = 21
    method: str = "sd"
    seed: int = 0
    init: str = "default"  # random | near | default (per-method choice)
    init_eps: float | None = None
    max_iter: int | None = None
    tol: float = 1e-12
    reset_period: int | None = None
    line_search: str | None = None
    out_dir: str | None = None

    def __post_init__(self):
        if self.experiment not in _METHODS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if self.experiment != "fd-check" and self.method not in _METHODS[self.experiment]:
            raise ValueError(f"method {self.method!r} not available for {self.experiment}")
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.init not in ("default", "random", "near"):
            raise ValueError(f"unknown init mode {self.init!r}")
        if self.init_eps is not None and self.init_eps <= 0.0:
            raise ValueError("near-optimum perturbation scale must be positive")


@dataclass
class RunReport:
    spec: ExperimentSpec
    final_value: float = float("nan")
    final_error: float = float("nan")
    iterations: int = 0
    converged: bool = False
    order: ConvergenceReport | None = None
    duration: float = 0.0
    error_message: str | None = None
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# problem construction


def fig1_matrix(n):
    """Descending integer spectrum: diag(n, n-1, ..., 1)."""
    return np.diag(np.arange(n, 0, -1.0))


def fig2_matrices(n, seed):
    """Seeded dense symmetric Q with spectrum n..1 plus N = diag(n..1).

    Returns ``(Q, N, T_hat)`` where ``T_hat`` diagonalizes Q with the
    eigenvalues ordered like N (the maximizing rotation).
    """
    rng = rng_from_seed(seed)
    V = random_rotation(rng, n)
    lam = np.arange(n, 0, -1.0)
    Q = V @ np.diag(lam) @ V.T
    Q = 0.5 * (Q + Q.T)
    N = np.diag(np.arange(n, 0, -1.0))
    w, U = np.linalg.eigh(Q)
    order = np.argsort(w)[::-1]
    T_hat = U[:, order]
    if np.linalg.det(T_hat) < 0.0:
        T_hat[:, -1] = -T_hat[:, -1]
    return Q, N, T_hat


def jacobi_matrices(n, seed):
    """Seeded symmetric Q with spectrum n..1; returns ``(Q, T_hat)``."""
    rng = rng_from_seed(seed)
    V = random_rotation(rng, n)
    lam = np.arange(n, 0, -1.0)
    Q = V @ np.diag(lam) @ V.T
    Q = 0.5 * (Q + Q.T)
    return Q, V


def axis_angle(x, axis):
    """Angle in [0, pi/2] between ``x`` and the line spanned by ``axis``.

    Formed from the orthogonal component, so it stays meaningful far below
    the resolution of ``arccos`` of the dot product.
    """
    c = abs(float(x @ axis))
    s = float(np.linalg.norm(x - (x @ axis) * axis))
    return float(np.arctan2(s, c))


# ---------------------------------------------------------------------------
# trace and report files


def trace_filename(spec):
    return f"{spec.experiment}-{spec.method}-{spec.seed}.csv"


def report_filename(spec):
    if spec.experiment == "fd-check":
        return f"fd-check-{spec.seed}.report.txt"
    return f"{spec.experiment}-{spec.method}-{spec.seed}.report.txt"


def _fmt(x):
    return format(float(x), ".17g")


def write_trace_csv(path, trace, value_label):
    lines = [f"iter,{value_label},grad_norm,error,step"]
    for i in range(len(trace)):
        lines.append(",".join([
            str(i), _fmt(trace.values[i]), _fmt(trace.grad_norms[i]),
            _fmt(trace.errors[i]), _fmt(trace.steps[i]),
        ]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path):
    """Parse a trace file back into an :class:`IterationTrace` (points are
    not stored in the CSV and come back as None)."""
    trace = IterationTrace()
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("iter,"):
            raise ValueError(f"{path} is not a trace file")
        for line in fh:
            if not line.strip():
                continue
            _, value, grad_norm, error, step = line.strip().split(",")
            trace.append(None, float(value), float(grad_norm), float(error), float(step))
    return trace


def write_report(path, report):
    """Key-value report; everything but the wall clock is reproducible
    bit-for-bit from (spec, seed), so the duration is deliberately left out."""
    spec = report.spec
    lines = [
        f"experiment: {spec.experiment}",
        f"n: {spec.n}",
        f"method: {spec.method}",
        f"seed: {spec.seed}",
        f"init: {spec.init}",
        f"init_eps: {'none' if spec.init_eps is None else _fmt(spec.init_eps)}",
        f"max_iter: {'default' if spec.max_iter is None else spec.max_iter}",
        f"tol: {_fmt(spec.tol)}",
        f"line_search: {spec.line_search or 'default'}",
        f"reset_period: {'default' if spec.reset_period is None else spec.reset_period}",
        f"iterations: {report.iterations}",
        f"converged: {report.converged}",
        f"final_value: {_fmt(report.final_value)}",
        f"final_error: {_fmt(report.final_error)}",
    ]
    if report.order is not None:
        lines += [
            f"order_p: {_fmt(report.order.order)}",
            f"order_theta: {_fmt(report.order.rate)}",
            f"order_residual: {_fmt(report.order.residual)}",
            f"order_window: {report.order.window[0]}..{report.order.window[1]}",
        ]
    else:
        lines.append("order_p: none")
    for key, val in sorted(report.extra.items()):
        lines.append(f"{key}: {val if isinstance(val, str) else _fmt(val)}")
    if report.error_message is not None:
        lines.append(f"solver_error: {report.error_message}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _order_fit(errors):
    window = longest_decreasing_run(errors)
    try:
        return estimate_order(errors, window)
    except OrderFitError:
        return None


def _emit(spec, trace, report, value_label):
    if spec.out_dir is not None:
        os.makedirs(spec.out_dir, exist_ok=True)
        if trace is not None:
            write_trace_csv(os.path.join(spec.out_dir, trace_filename(spec)), trace, value_label)
        write_report(os.path.join(spec.out_dir, report_filename(spec)), report)


# ---------------------------------------------------------------------------
# experiment drivers


def _finish(spec, trace, converged, value_label, t0, extra=None, error_message=None):
    report = RunReport(spec)
    report.error_message = error_message
    report.converged = converged
    report.extra = extra or {}
    if trace is not None and len(trace) > 0:
        report.final_value = trace.values[-1]
        report.final_error = trace.errors[-1]
        report.iterations = trace.iterations
        report.order = _order_fit(trace.errors)
    report.duration = time.perf_counter() - t0
    _emit(spec, trace, report, value_label)
    return report, trace


def run_fig1(spec):
    """Rayleigh quotient extremization on S^{n-1} with Q = diag(n..1)."""
    assert spec.experiment == "fig1"
    t0 = time.perf_counter()
    n = spec.n
    Q = fig1_matrix(n)
    axis = np.zeros(n)
    axis[0] = 1.0
    rng = rng_from_seed(spec.seed)

    init = spec.init
    if init == "default":
        init = "random" if spec.method in ("sd", "cg") else "near"
    if init == "random":
        x0 = random_unit_vector(rng, n)
    else:
        eps = spec.init_eps if spec.init_eps is not None else 1e-1
        u = random_unit_tangent(rng, axis)
        x0 = axis * np.cos(eps) + u * np.sin(eps)

    def error_fn(x):
        return axis_angle(x, axis)

    max_iter = spec.max_iter if spec.max_iter is not None else (2000 if spec.method in ("sd", "cg") else 100)
    config = SolverConfig(
        grad_tol=spec.tol,
        max_iter=max_iter,
        line_search=spec.line_search or "exact",
        reset_period=spec.reset_period,
    )

    converged = False
    message = None
    trace = None
    try:
        if spec.method == "sd":
            objective = RayleighObjective(Q, which="max")
            trace = steepest_descent(objective, x0, config, error_fn=error_fn)
            converged = trace.grad_norms[-1] < config.grad_tol
        elif spec.method == "newton":
            objective = RayleighObjective(Q, which="max")
            trace = newton(objective, x0, config, error_fn=error_fn)
            # an early stop without exception is either the tolerance or a
            # singular shift, and the latter is convergence as well
            converged = trace.grad_norms[-1] < config.grad_tol or trace.iterations < max_iter
        elif spec.method == "cg":
            result = cg_extreme_eigen(Q, x0, config, error_fn=error_fn)
            trace, converged = result.trace, result.converged
        elif spec.method == "rqi":
            result = rqi(Q, x0, config, error_fn=error_fn)
            trace, converged = result.trace, result.converged
        else:  # newton-rq
            result = newton_rayleigh(Q, x0, config, error_fn=error_fn)
            trace, converged = result.trace, result.converged
    except SolverError as exc:
        trace = exc.trace
        message = f"{type(exc).__name__}: {exc}"
    return _finish(spec, trace, converged, "rho", t0, error_message=message)


def run_fig2(spec):
    """Trace-objective ascent on SO(n) with seeded Q and N = diag(n..1)."""
    assert spec.experiment == "fig2"
    t0 = time.perf_counter()
    n = spec.n
    Q, N, T_hat = fig2_matrices(n, spec.seed)
    objective = BrockettObjective(Q, N)
    rng = rng_from_seed(spec.seed + 1)  # independent of the Q draw

    init = spec.init
    if init == "default":
        init = "near"
    if init == "random":
        T0 = random_rotation(rng, n)
    else:
        eps = spec.init_eps
        if eps is None:
            eps = 1e-2 if spec.method == "newton" else 1e-1
        X = random_unit_skew(rng, n)
        T0 = so_geodesic(T_hat, X, eps)

    max_iter = spec.max_iter if spec.max_iter is not None else (4000 if spec.method in ("sd", "cg") else 50)
    config = SolverConfig(
        grad_tol=spec.tol,
        max_iter=max_iter,
        line_search=spec.line_search or "estimate",
        reset_period=spec.reset_period,
    )

    converged = False
    message = None
    trace = None
    try:
        if spec.method == "sd":
            trace = steepest_descent(objective, T0, config)
            converged = trace.grad_norms[-1] < config.grad_tol
        elif spec.method == "cg":
            trace = conjugate_gradient(objective, T0, config)
            converged = trace.grad_norms[-1] < config.grad_tol
        else:
            trace = newton(objective, T0, config)
            converged = trace.grad_norms[-1] < config.grad_tol or trace.iterations < max_iter
    except SolverError as exc:
        trace = exc.trace
        message = f"{type(exc).__name__}: {exc}"
    return _finish(spec, trace, converged, "f", t0, error_message=message)


def run_jacobi(spec):
    """Newton diagonalization of a seeded symmetric matrix."""
    assert spec.experiment == "jacobi"
    t0 = time.perf_counter()
    n = spec.n
    Q, T_hat = jacobi_matrices(n, spec.seed)
    objective = JacobiObjective(Q)
    rng = rng_from_seed(spec.seed + 1)

    init = spec.init
    if init == "default":
        init = "near"
    if init == "random":
        T0 = random_rotation(rng, n)
    else:
        eps = spec.init_eps if spec.init_eps is not None else 1e-1
        X = random_unit_skew(rng, n)
        T0 = so_geodesic(T_hat, X, eps)

    max_iter = spec.max_iter if spec.max_iter is not None else 50
    config = SolverConfig(
        grad_tol=spec.tol,
        max_iter=max_iter,
        line_search=spec.line_search or "golden",
        reset_period=spec.reset_period,
    )

    converged = False
    message = None
    trace = None
    try:
        trace = newton(objective, T0, config)
        converged = trace.grad_norms[-1] < config.grad_tol or trace.iterations < max_iter
    except SolverError as exc:
        trace = exc.trace
        message = f"{type(exc).__name__}: {exc}"
    return _finish(spec, trace, converged, "f", t0, error_message=message)


def run_fd_check(spec):
    """Gradient/Hessian finite-difference sweep over all three problem
    families; raises :class:`ToleranceBreached` (after writing the report)
    if any family misses its target."""
    assert spec.experiment == "fd-check"
    t0 = time.perf_counter()
    families = (
        ("rayleigh", rayleigh_family_check, 8),
        ("brockett", brockett_family_check, 6),
        ("jacobi", jacobi_family_check, 5),
    )
    extra = {}
    worst_grad = 0.0
    worst_hess = 0.0
    for name, check, n in families:
        g, h = check(n=n, seed=spec.seed)
        extra[f"{name}_n"] = str(n)
        extra[f"{name}_grad_err"] = g
        extra[f"{name}_hess_err"] = h
        worst_grad = max(worst_grad, g)
        worst_hess = max(worst_hess, h)
    extra["grad_target"] = FD_GRAD_TARGET
    extra["hess_target"] = FD_HESS_TARGET
    ok = worst_grad < FD_GRAD_TARGET and worst_hess < FD_HESS_TARGET
    report = RunReport(spec)
    report.converged = ok
    report.final_value = worst_grad
    report.final_error = worst_hess
    report.extra = extra
    report.duration = time.perf_counter() - t0
    _emit(spec, None, report, "f")
    if not ok:
        raise ToleranceBreached(
            f"fd-check failed: grad {worst_grad:.3e} (target {FD_GRAD_TARGET:.0e}), "
            f"hess {worst_hess:.3e} (target {FD_HESS_TARGET:.0e})")
    return report, None


RUNNERS = {
    "fig1": run_fig1,
    "fig2": run_fig2,
    "jacobi": run_jacobi,
    "fd-check": run_fd_check,
}


def run_experiment(spec):
    return RUNNERS[spec.experiment](spec)
