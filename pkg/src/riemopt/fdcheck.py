"""Finite-difference verification of analytic gradients and Hessian forms.

Derivatives are taken along geodesics: the slope of ``t -> f(exp_p(t u))``
at 0 must equal ``<grad f, u>`` and its curvature must equal the second
covariant differential applied to ``(u, u)``.  Central differences, so the
truncation error is quadratic in the step.
"""

from __future__ import annotations

import numpy as np

from .rotation import (
    BrockettProblem,
    JacobiProblem,
    SpecialOrthogonal,
    brockett_gradient,
    brockett_hessian_operator,
    brockett_value,
    jacobi_gradient,
    jacobi_hessian_operator,
    jacobi_value,
)
from .sampling import (
    random_rotation,
    random_symmetric,
    random_unit_skew,
    random_unit_tangent,
    random_unit_vector,
    rng_from_seed,
)
from .sphere import RayleighProblem, Sphere, rayleigh_gradient, rayleigh_hessian_apply, rayleigh_value

GRAD_STEP = 1e-5
HESS_STEP = 1e-4


def geodesic_slope(value_fn, manifold, p, u, step=GRAD_STEP):
    """Central-difference derivative of ``value_fn`` along ``exp_p(t u)``."""
    return (value_fn(manifold.exp(p, u, step)) - value_fn(manifold.exp(p, u, -step))) / (2.0 * step)


def geodesic_curvature(value_fn, manifold, p, u, step=HESS_STEP):
    """Central-difference second derivative along ``exp_p(t u)``."""
    plus = value_fn(manifold.exp(p, u, step))
    minus = value_fn(manifold.exp(p, u, -step))
    return (plus - 2.0 * value_fn(p) + minus) / (step * step)


def relative_error(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _direction_checks(manifold, value_fn, grad, hess_form, p, directions):
    grad_err = 0.0
    hess_err = 0.0
    for u in directions:
        slope = geodesic_slope(value_fn, manifold, p, u)
        grad_err = max(grad_err, relative_error(manifold.inner(p, grad, u), slope))
        curv = geodesic_curvature(value_fn, manifold, p, u)
        hess_err = max(hess_err, relative_error(hess_form(u), curv))
    return grad_err, hess_err


def rayleigh_family_check(n=8, seed=0, instances=20, directions=8):
    """Max relative gradient/Hessian-form errors over seeded quotient instances."""
    rng = rng_from_seed(seed)
    manifold = Sphere(n)
    worst_g, worst_h = 0.0, 0.0
    for _ in range(instances):
        prob = RayleighProblem(random_symmetric(rng, n))
        x = random_unit_vector(rng, n)
        dirs = [random_unit_tangent(rng, x) for _ in range(directions)]
        g = rayleigh_gradient(prob, x)

        def form(u):
            return float(rayleigh_hessian_apply(prob, x, u) @ u)

        eg, eh = _direction_checks(manifold, lambda p: rayleigh_value(prob, p), g, form, x, dirs)
        worst_g, worst_h = max(worst_g, eg), max(worst_h, eh)
    return worst_g, worst_h


def brockett_family_check(n=6, seed=0, instances=20, directions=8):
    rng = rng_from_seed(seed)
    manifold = SpecialOrthogonal(n)
    N = np.diag(np.arange(n, 0, -1.0))
    worst_g, worst_h = 0.0, 0.0
    for _ in range(instances):
        prob = BrockettProblem(random_symmetric(rng, n), N)
        T = random_rotation(rng, n)
        dirs = [random_unit_skew(rng, n) for _ in range(directions)]
        g = brockett_gradient(prob, T)

        def form(X):
            # second differential against (X, X) is -1/2 tr(L(X) X)
            return -0.5 * float(np.trace(brockett_hessian_operator(prob, T, X) @ X))

        eg, eh = _direction_checks(manifold, lambda p: brockett_value(prob, p), g, form, T, dirs)
        worst_g, worst_h = max(worst_g, eg), max(worst_h, eh)
    return worst_g, worst_h


def jacobi_family_check(n=5, seed=0, instances=20, directions=8):
    rng = rng_from_seed(seed)
    manifold = SpecialOrthogonal(n)
    worst_g, worst_h = 0.0, 0.0
    for _ in range(instances):
        prob = JacobiProblem(random_symmetric(rng, n))
        T = random_rotation(rng, n)
        dirs = [random_unit_skew(rng, n) for _ in range(directions)]
        g = jacobi_gradient(prob, T)

        def form(X):
            return -float(np.trace(jacobi_hessian_operator(prob, T, X) @ X))

        eg, eh = _direction_checks(manifold, lambda p: jacobi_value(prob, p), g, form, T, dirs)
        worst_g, worst_h = max(worst_g, eg), max(worst_h, eh)
    return worst_g, worst_h
