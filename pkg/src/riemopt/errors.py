"""Exception types raised by the geometry, solver, and harness layers."""


class RiemoptError(Exception):
    """Base class for all library-specific errors."""


# --- convergence-order estimation ---

class OrderFitError(RiemoptError):
    pass


class TooFewPoints(OrderFitError):
    pass


class NonDecreasingSequence(OrderFitError):
    pass


class AllBelowFloor(OrderFitError):
    pass


# --- geometry ---

class GeometryError(RiemoptError):
    pass


class ZeroTangent(GeometryError):
    pass


class NotUnitDirection(GeometryError):
    pass


class NotTangent(GeometryError):
    pass


class AntipodalPoints(GeometryError):
    pass


# --- linear algebra on problems ---

class SingularMatrix(RiemoptError):
    pass


class DegeneratePivot(RiemoptError):
    pass


class SingularShift(RiemoptError):
    """The shifted matrix is singular to working precision.

    For the eigenvalue drivers this signals success: the current Rayleigh
    quotient is an eigenvalue up to round-off.
    """


class IndefiniteOperator(RiemoptError):
    pass


class NotAscentDirection(RiemoptError):
    pass


class DegenerateCommutator(RiemoptError):
    pass


# --- solvers ---

class SolverError(RiemoptError):
    """Base for iteration failures; carries the partial trace when available."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NoDecrease(SolverError):
    pass


class MaxEvaluations(SolverError):
    pass


class LineSearchFailed(SolverError):
    pass


class ZeroDenominator(SolverError):
    pass


class Diverged(SolverError):
    pass


class ZeroGradient(SolverError):
    pass


class MaxIterations(SolverError):
    pass


class SingularHessian(SolverError):
    pass


# --- harness ---

class ToleranceBreached(RiemoptError):
    pass
