"""The imbedded unit sphere and the Rayleigh quotient problem.

Points are unit n-vectors, tangents are n-vectors orthogonal to the base
point.  Geodesics are great circles with closed-form exponential map,
parallel translation, and logarithm, so no differential equations are
solved anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GeodesicObjective, Manifold
from .errors import (
    AntipodalPoints,
    DegeneratePivot,
    NotTangent,
    NotUnitDirection,
    SingularMatrix,
    SingularShift,
    ZeroTangent,
)

UNIT_TOL = 1e-12
TANGENT_TOL = 1e-12
SHIFT_CONDITION_LIMIT = 1e14


def check_unit(x, tol=UNIT_TOL):
    x = np.asarray(x, dtype=float)
    if abs(x @ x - 1.0) > tol:
        raise NotUnitDirection(f"|x^T x - 1| = {abs(x @ x - 1.0):.3e} exceeds {tol:.1e}")
    return x


def check_tangent(x, v, tol=TANGENT_TOL):
    v = np.asarray(v, dtype=float)
    bound = tol * max(np.linalg.norm(v), 1e-300)
    if abs(x @ v) > bound:
        raise NotTangent(f"|x^T v| = {abs(x @ v):.3e} exceeds {bound:.3e}")
    return v


def project_tangent(x, v):
    """Remove the normal component of ``v`` at ``x`` (round-off control)."""
    return v - (x @ v) * x


def sphere_exp(x, h, t=1.0):
    """Great-circle point ``x cos(t|h|) + (h/|h|) sin(t|h|)``.

    ``t`` is scaled by ``|h|`` so that ``sphere_exp(x, h, 1)`` is the
    exponential map of the unnormalized tangent ``h``.  The result is
    renormalized to suppress round-off drift.
    """
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    nh = np.linalg.norm(h)
    if nh == 0.0:
        if t == 0.0:
            return x.copy()
        raise ZeroTangent("cannot move along a zero tangent")
    ang = t * nh
    y = x * np.cos(ang) + (h / nh) * np.sin(ang)
    return y / np.linalg.norm(y)


def sphere_transport(x, h, t, v):
    """Parallel translation of ``v`` along the great circle through ``x``
    with unit direction ``h``, to the point at arc length ``t``."""
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    if abs(h @ h - 1.0) > UNIT_TOL:
        raise NotUnitDirection("transport direction must have unit length")
    v = check_tangent(x, v)
    return v - (h @ v) * (x * np.sin(t) + h * (1.0 - np.cos(t)))


def sphere_log(x, y):
    """Inverse of the geodesic map: tangent at ``x`` pointing to ``y``.

    Returns ``(v, d)`` with ``|v| = d = arccos(x^T y)`` and
    ``sphere_exp(x, v, 1) = y``.  The angle is formed with ``arctan2`` of
    the perpendicular component, which resolves nearly identical points far
    below the precision of ``arccos``.  Antipodal pairs have no unique
    geodesic.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.array_equal(x, y):
        return np.zeros_like(x), 0.0
    c = float(np.clip(x @ y, -1.0, 1.0))
    w = project_tangent(x, y - c * x)  # strip the normal round-off component
    nw = float(np.linalg.norm(w))
    if nw == 0.0:
        if c < 0.0:
            raise AntipodalPoints("antipodal points admit no unique geodesic")
        return np.zeros_like(x), 0.0
    if c <= -1.0 + 1e-14:
        raise AntipodalPoints("antipodal points admit no unique geodesic")
    d = float(np.arctan2(nw, c))
    return (d / nw) * w, d


def sphere_distance(x, y):
    return float(np.arccos(np.clip(np.asarray(x) @ np.asarray(y), -1.0, 1.0)))


class Sphere(Manifold):
    """S^{n-1} imbedded in R^n with the induced round metric."""

    def __init__(self, n):
        if n < 2:
            raise ValueError("sphere needs ambient dimension >= 2")
        self.n = int(n)

    @property
    def dim(self):
        return self.n - 1

    def exp(self, p, v, t=1.0):
        return sphere_exp(p, v, t)

    def transport(self, p, v, t, w):
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return np.asarray(w, dtype=float).copy()
        return sphere_transport(p, v / nv, t * nv, w)

    def inner(self, p, u, v):
        return float(np.asarray(u) @ np.asarray(v))


# ---------------------------------------------------------------------------
# Rayleigh quotient


@dataclass(frozen=True)
class RayleighProblem:
    """Rayleigh quotient data ``rho(x) = x^T Q x`` for symmetric ``Q``."""

    Q: np.ndarray

    def __post_init__(self):
        Q = np.asarray(self.Q, dtype=float)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValueError("Q must be square")
        if not np.array_equal(Q, Q.T):
            raise ValueError("Q must be exactly symmetric as stored")
        object.__setattr__(self, "Q", Q)

    @property
    def n(self):
        return self.Q.shape[0]


def rayleigh_value(prob, x):
    """rho(x) = x^T Q x."""
    return float(x @ prob.Q @ x)


def rayleigh_gradient(prob, x):
    """Gradient 2(Qx - rho(x) x), with an explicit tangency projection.

    The projection removes the normal round-off component, which otherwise
    caps the attainable accuracy of gradient-based iterations near an
    eigenvector.
    """
    w = prob.Q @ x
    g = 2.0 * (w - (x @ w) * x)
    return project_tangent(x, g)


def rayleigh_hessian_apply(prob, x, u):
    """Second-covariant-differential operator 2 (I - xx^T)(Q - rho I) u."""
    u = check_tangent(x, u)
    rho = rayleigh_value(prob, x)
    w = 2.0 * (prob.Q @ u - rho * u)
    return project_tangent(x, w)


def solve_projected_linear(A, x, v):
    """Solve ``(I - xx^T) A u = v`` for a tangent ``u`` at ``x``.

    Uses ``u = A^{-1}(v - (x^T A^{-1} v)/(x^T A^{-1} x) x)``, which is
    tangent by construction.
    """
    A = np.asarray(A, dtype=float)
    x = np.asarray(x, dtype=float)
    v = check_tangent(x, v)
    try:
        sol = np.linalg.solve(A, np.column_stack([v, x]))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from None
    if not np.all(np.isfinite(sol)):
        raise SingularMatrix("solve produced non-finite values")
    Av, Ax = sol[:, 0], sol[:, 1]
    pivot = float(x @ Ax)
    inv_norm = 1.0 / np.linalg.svd(A, compute_uv=False)[-1]
    if abs(pivot) < 1e-14 * inv_norm:
        raise DegeneratePivot(f"|x^T A^-1 x| = {abs(pivot):.3e} too small")
    u = Av - (float(x @ Av) / pivot) * Ax
    return project_tangent(x, u)


def rayleigh_newton_step(prob, x):
    """Newton direction ``H = -x + y / (x^T y)`` with ``y = (Q - rho I)^{-1} x``.

    Raises :class:`SingularShift` when ``Q - rho(x) I`` is singular to
    working precision, which the eigenvalue drivers interpret as
    convergence (rho is an eigenvalue).
    """
    x = np.asarray(x, dtype=float)
    rho = rayleigh_value(prob, x)
    A = prob.Q - rho * np.eye(prob.n)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] == 0.0 or sv[0] / sv[-1] > SHIFT_CONDITION_LIMIT:
        raise SingularShift(f"rho = {rho!r} is an eigenvalue to working precision")
    y = np.linalg.solve(A, x)
    pivot = float(x @ y)
    if abs(pivot) < 1e-14 * np.linalg.norm(y):
        raise DegeneratePivot("x^T (Q - rho I)^{-1} x vanishes; no tangent step")
    H = -x + y / pivot
    return project_tangent(x, H)


def _line_rotation(a, b):
    # rotation (c, s) maximizing (b cos 2t + a sin 2t) / 2, branch chosen
    # for numerical stability; v = 1 - c formed without cancellation
    r = float(np.hypot(a, b))
    if r == 0.0:
        return 1.0, 0.0, 0.0
    if b >= 0.0:
        c = np.sqrt(0.5 * (1.0 + b / r))
        s = a / (2.0 * r * c)
    else:
        s = np.sqrt(0.5 * (1.0 - b / r))
        c = a / (2.0 * r * s)
    return float(c), float(s), float(s * s / (1.0 + c))


def rayleigh_line_max(prob, x, h):
    """Closed-form maximizer of ``rho`` along the great circle ``x c + h s``.

    Returns ``(c, s, v)`` with ``c^2 + s^2 = 1`` and ``v = 1 - c`` computed
    stably as ``s^2 / (1 + c)``.  When ``rho`` is constant on the circle
    (``a = b = 0``) the point is already optimal and ``(1, 0, 0)`` is
    returned.
    """
    x = np.asarray(x, dtype=float)
    h = check_unit(h)
    qh = prob.Q @ h
    a = 2.0 * float(x @ qh)
    b = float(x @ (prob.Q @ x)) - float(h @ qh)
    return _line_rotation(a, b)


class RayleighObjective(GeodesicObjective):
    """Solver-facing Rayleigh extremization.

    The library minimizes, so ``which='max'`` works on ``-rho`` and bridges
    signs internally; traces report the natural ``rho``.
    """

    def __init__(self, Q, which="max"):
        if which not in ("max", "min"):
            raise ValueError("which must be 'max' or 'min'")
        self.problem = Q if isinstance(Q, RayleighProblem) else RayleighProblem(np.asarray(Q, dtype=float))
        self.which = which
        self._sign = -1.0 if which == "max" else 1.0
        self._manifold = Sphere(self.problem.n)

    @property
    def manifold(self):
        return self._manifold

    def value(self, x):
        return self._sign * rayleigh_value(self.problem, x)

    def report_value(self, x):
        return rayleigh_value(self.problem, x)

    def gradient(self, x):
        return self._sign * rayleigh_gradient(self.problem, x)

    def hessian_apply(self, x, u):
        return self._sign * rayleigh_hessian_apply(self.problem, x, u)

    def newton_direction(self, x):
        # identical for rho and -rho: H = -(Hess)^{-1} grad is sign-free
        return rayleigh_newton_step(self.problem, x)

    def exact_line_step(self, x, h):
        nh = np.linalg.norm(h)
        if nh == 0.0:
            raise ZeroTangent("line search direction is zero")
        hu = h / nh
        if self.which == "max":
            c, s, _ = rayleigh_line_max(self.problem, x, hu)
        else:
            c, s, _ = _rayleigh_line_min(self.problem, x, hu)
        t = float(np.arctan2(s, c))
        if t < 0.0:
            t += np.pi  # rho has period pi along great circles
        return t / nh


def _rayleigh_line_min(prob, x, h):
    # minimizing rho is maximizing -rho: flip both line coefficients
    qh = prob.Q @ h
    a = -2.0 * float(x @ qh)
    b = float(h @ qh) - float(x @ (prob.Q @ x))
    return _line_rotation(a, b)
