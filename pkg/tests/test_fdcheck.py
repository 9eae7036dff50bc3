import numpy as np

from riemopt.fdcheck import (
    brockett_family_check,
    geodesic_curvature,
    geodesic_slope,
    jacobi_family_check,
    rayleigh_family_check,
)
from riemopt.sphere import Sphere


def test_slope_and_curvature_on_known_function():
    # f(x) = x_0 restricted to the sphere: slope along e1 at e0 is cos'(0) = 0
    M = Sphere(3)
    p = np.array([1.0, 0.0, 0.0])
    u = np.array([0.0, 1.0, 0.0])
    f = lambda x: float(x[0])
    assert abs(geodesic_slope(f, M, p, u)) <= 1e-10
    # second derivative of cos(t) at 0 is -1
    assert abs(geodesic_curvature(f, M, p, u) + 1.0) <= 1e-6


def test_rayleigh_family_meets_targets():
    g, h = rayleigh_family_check(n=8, seed=0, instances=5)
    assert g < 1e-6
    assert h < 1e-5


def test_brockett_family_meets_targets():
    g, h = brockett_family_check(n=6, seed=0, instances=5)
    assert g < 1e-6
    assert h < 1e-5


def test_jacobi_family_meets_targets():
    g, h = jacobi_family_check(n=5, seed=0, instances=5)
    assert g < 1e-6
    assert h < 1e-5
