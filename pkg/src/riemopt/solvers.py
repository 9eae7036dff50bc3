"""Geodesic steepest descent, Newton iteration, and conjugate gradient.

All three solvers minimize a :class:`~riemopt.core.GeodesicObjective` over
its manifold.  Maximization problems are expected to negate themselves (the
objective adapters in :mod:`riemopt.sphere` and :mod:`riemopt.rotation` do).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GeodesicObjective, IterationTrace
from .errors import (
    DegenerateCommutator,
    Diverged,
    IndefiniteOperator,
    LineSearchFailed,
    MaxEvaluations,
    NoDecrease,
    NotAscentDirection,
    SingularHessian,
    SingularShift,
    ZeroTangent,
)

_INV_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class SolverConfig:
    """Shared solver knobs.

    ``line_search`` selects 'exact' (problem closed form), 'golden'
    (bracketing golden section), or 'estimate' (problem-supplied step
    bound).  ``reset_period`` defaults to the intrinsic manifold dimension
    when left as None.
    """

    grad_tol: float = 1e-12
    max_iter: int = 1000
    line_search: str = "golden"
    golden_tol: float = 1e-10
    golden_growth: float = 2.0
    initial_step: float = 1.0
    max_evaluations: int = 200
    reset_period: int | None = None
    beta_rule: str = "polak-ribiere"
    pr_clamp: bool = False
    newton_fallback: str = "gradient"

    def __post_init__(self):
        if self.grad_tol <= 0 or self.golden_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.reset_period is not None and self.reset_period < 1:
            raise ValueError("reset period must be >= 1")
        if self.line_search not in ("exact", "golden", "estimate"):
            raise ValueError(f"unknown line search kind {self.line_search!r}")
        if self.beta_rule not in ("polak-ribiere", "fletcher-reeves"):
            raise ValueError(f"unknown beta rule {self.beta_rule!r}")
        if self.newton_fallback not in ("gradient", "abort"):
            raise ValueError(f"unknown newton fallback {self.newton_fallback!r}")


@dataclass(frozen=True)
class LineSearchResult:
    step: float
    evaluations: int
    value: float


def _initial_scale(objective, p, H, config):
    try:
        return objective.step_estimate(p, H)
    except (NotImplementedError, NotAscentDirection, DegenerateCommutator):
        return config.initial_step


def line_minimize_geodesic(objective: GeodesicObjective, p, H, config=None) -> LineSearchResult:
    """Locate a local minimizer of ``t -> value(exp(p, t H))`` on [0, inf).

    With 'exact' or 'estimate' kinds the step comes straight from the
    problem; 'golden' brackets by repeated doubling from an initial scale
    and refines by golden section to the configured relative width.
    """
    config = config or SolverConfig()
    M = objective.manifold
    if M.norm(p, H) == 0.0:
        raise ZeroTangent("line search direction is zero")

    if config.line_search == "exact":
        try:
            t = objective.exact_line_step(p, H)
        except NotImplementedError:
            raise LineSearchFailed(
                "problem provides no closed-form line step; use 'golden'") from None
        return LineSearchResult(t, 1, objective.value(M.exp(p, H, t)))
    if config.line_search == "estimate":
        try:
            t = objective.step_estimate(p, H)
        except NotImplementedError:
            raise LineSearchFailed(
                "problem provides no step estimate; use 'golden'") from None
        return LineSearchResult(t, 1, objective.value(M.exp(p, H, t)))

    evals = 0

    def fun(t):
        nonlocal evals
        evals += 1
        return objective.value(M.exp(p, H, t))

    f0 = objective.value(p)
    t1 = _initial_scale(objective, p, H, config)
    growth = config.golden_growth

    f1 = fun(t1)
    if f1 < f0:
        a, fa = 0.0, f0
        b, fb = t1, f1
        c, fc = growth * t1, fun(growth * t1)
        while fc < fb:
            if evals >= config.max_evaluations:
                raise MaxEvaluations("bracketing exhausted the evaluation budget")
            a, fa = b, fb
            b, fb = c, fc
            c = growth * c
            fc = fun(c)
    else:
        # shrink toward zero until the function decreases at all
        while f1 >= f0:
            if evals >= config.max_evaluations or t1 < 1e-300:
                raise NoDecrease("no sampled step decreased the objective")
            t1 /= growth
            f1 = fun(t1)
        a, b, c = 0.0, t1, growth * t1
        fb = f1

    # golden section on [a, c]
    x1 = c - _INV_GOLD * (c - a)
    x2 = a + _INV_GOLD * (c - a)
    fx1, fx2 = fun(x1), fun(x2)
    while (c - a) > config.golden_tol * max(abs(c), 1e-30):
        if evals >= config.max_evaluations:
            raise MaxEvaluations("golden section exhausted the evaluation budget")
        if fx1 < fx2:
            c, x2, fx2 = x2, x1, fx1
            x1 = c - _INV_GOLD * (c - a)
            fx1 = fun(x1)
        else:
            a, x1, fx1 = x1, x2, fx2
            x2 = a + _INV_GOLD * (c - a)
            fx2 = fun(x2)
    if fx1 < fx2:
        t, ft = x1, fx1
    else:
        t, ft = x2, fx2
    if fb < ft:
        t, ft = b, fb
    return LineSearchResult(float(t), evals, float(ft))


def _start_trace(objective, p, error_fn):
    M = objective.manifold
    g = objective.gradient(p)
    gn = M.norm(p, g)
    trace = IterationTrace()
    trace.append(p, objective.report_value(p), gn, error_fn(p))
    return trace, g, gn


def steepest_descent(objective: GeodesicObjective, p0, config=None, error_fn=None) -> IterationTrace:
    """Line-minimize along the negative gradient until the gradient norm
    drops below tolerance or the iteration budget runs out."""
    config = config or SolverConfig()
    error_fn = error_fn or objective.error_metric
    M = objective.manifold
    p = p0
    trace, g, gn = _start_trace(objective, p, error_fn)
    for _ in range(config.max_iter):
        if gn < config.grad_tol:
            break
        G = -g
        try:
            ls = line_minimize_geodesic(objective, p, G, config)
        except (NoDecrease, MaxEvaluations, NotAscentDirection, DegenerateCommutator,
                LineSearchFailed) as exc:
            raise LineSearchFailed(str(exc), trace=trace) from exc
        trace.record_step(ls.step)
        p = M.exp(p, G, ls.step)
        g = objective.gradient(p)
        gn = M.norm(p, g)
        trace.append(p, objective.report_value(p), gn, error_fn(p))
    return trace


def newton(objective: GeodesicObjective, p0, config=None, error_fn=None) -> IterationTrace:
    """Unit-step Newton iteration ``p <- exp_p(H)`` with
    ``hessian(H) = -gradient``.

    There is no damping or line search.  On an indefinite or singular
    second differential the configured fallback takes a single
    line-minimized gradient step instead.  A singular shift reported by the
    problem means the current iterate is critical to working precision, so
    the iteration stops there.
    """
    config = config or SolverConfig()
    error_fn = error_fn or objective.error_metric
    M = objective.manifold
    p = p0
    trace, g, gn = _start_trace(objective, p, error_fn)
    grow_count = 0
    for _ in range(config.max_iter):
        if gn < config.grad_tol:
            break
        try:
            H = objective.newton_direction(p)
            step = 1.0
        except SingularShift:
            break
        except (IndefiniteOperator, SingularHessian, np.linalg.LinAlgError) as exc:
            if config.newton_fallback != "gradient":
                raise SingularHessian(str(exc), trace=trace) from exc
            H = -g
            try:
                step = line_minimize_geodesic(objective, p, H, config).step
            except (NoDecrease, MaxEvaluations, LineSearchFailed) as exc2:
                raise LineSearchFailed(str(exc2), trace=trace) from exc2
        trace.record_step(step)
        p = M.exp(p, H, step)
        g = objective.gradient(p)
        gn_new = M.norm(p, g)
        grow_count = grow_count + 1 if gn_new > gn else 0
        gn = gn_new
        trace.append(p, objective.report_value(p), gn, error_fn(p))
        if grow_count >= 5:
            raise Diverged("gradient norm grew for 5 consecutive steps", trace=trace)
    return trace


def conjugate_gradient(objective: GeodesicObjective, p0, config=None, error_fn=None) -> IterationTrace:
    """Geodesic conjugate gradient.

    The new direction is ``H_{i+1} = G_{i+1} + gamma_i tau(H_i)`` where both
    the previous gradient and direction ride the step geodesic by parallel
    translation and ``gamma_i = <G_{i+1} - tau(G_i), G_{i+1}> / <G_i, H_i>``.
    The direction is reset to the plain gradient every ``reset_period``
    steps (default: manifold dimension), and whenever the gamma denominator
    vanishes or the mixed direction fails to decrease the objective.
    """
    config = config or SolverConfig()
    error_fn = error_fn or objective.error_metric
    M = objective.manifold
    reset_period = config.reset_period or M.dim
    p = p0
    trace, g, gn = _start_trace(objective, p, error_fn)
    G = -g
    H = G
    for i in range(config.max_iter):
        if gn < config.grad_tol:
            break
        try:
            ls = line_minimize_geodesic(objective, p, H, config)
        except (NoDecrease, MaxEvaluations, NotAscentDirection, DegenerateCommutator,
                LineSearchFailed) as exc:
            if H is G:
                raise LineSearchFailed(str(exc), trace=trace) from exc
            H = G  # drop conjugacy, retry along the gradient
            try:
                ls = line_minimize_geodesic(objective, p, H, config)
            except (NoDecrease, MaxEvaluations, NotAscentDirection, DegenerateCommutator,
                    LineSearchFailed) as exc2:
                raise LineSearchFailed(str(exc2), trace=trace) from exc2
        lam = ls.step
        p_next = M.exp(p, H, lam)
        tau_G = M.transport(p, H, lam, G)
        tau_H = M.transport(p, H, lam, H)
        g_next = objective.gradient(p_next)
        G_next = -g_next
        gn_next = M.norm(p_next, g_next)
        denom = M.inner(p, G, H)
        if (i % reset_period) == reset_period - 1 or denom == 0.0:
            H_next = G_next
        else:
            if config.beta_rule == "polak-ribiere":
                gamma = M.inner(p_next, G_next - tau_G, G_next) / denom
            else:
                gamma = M.inner(p_next, G_next, G_next) / M.inner(p, G, G)
            if config.pr_clamp:
                gamma = max(gamma, 0.0)
            H_next = G_next + gamma * tau_H
        trace.record_step(lam)
        p, g, gn, G, H = p_next, g_next, gn_next, G_next, H_next
        trace.append(p, objective.report_value(p), gn, error_fn(p))
    return trace
