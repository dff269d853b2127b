"""Exception types raised by the periscope library.

Every error carries a short ``code`` used as the flag column of CSV reports.
"""


class PeriscopeError(Exception):
    code = "error"


class DegenerateNormalError(PeriscopeError):
    code = "degenerate-normal"


class NonUniqueGeodesicError(PeriscopeError):
    code = "non-unique-geodesic"


class ZeroDistanceError(PeriscopeError):
    code = "zero-distance"


class NoIntersectionError(PeriscopeError):
    code = "no-intersection"


class ConvergenceError(PeriscopeError):
    code = "convergence"


class DomainError(PeriscopeError):
    code = "domain"


class DimensionError(PeriscopeError):
    code = "dimension"


class FieldEvaluationError(PeriscopeError):
    code = "field-evaluation"


class InverseMapError(PeriscopeError):
    code = "inverse-map"


class InfeasibleError(PeriscopeError):
    """A mirror configuration violates one of its standing invariants.

    ``invariant`` names the violated condition (for example ``"slope-bound"``).
    """

    code = "infeasible"
    invariant = "feasibility"

    def __init__(self, message, invariant=None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class InfeasibleConfigurationError(InfeasibleError):
    invariant = "feasibility"


class DegenerateError(InfeasibleError):
    code = "degenerate"
    invariant = "degenerate-radicand"


class VerticalDegenerateError(InfeasibleError):
    code = "vertical-degenerate"
    invariant = "vertical-degenerate"


class SlopeBoundError(InfeasibleError):
    code = "slope-bound"
    invariant = "slope-bound"


class PathBudgetError(InfeasibleError):
    code = "path-budget"
    invariant = "path-budget"
