"""Exception hierarchy shared across the package.

GeometryError subclasses signal invalid or infeasible geometric input; the
CLI maps them to exit code 3.  InternalError subclasses indicate a bug or a
tolerance breakdown inside the library itself.
"""


class TetrageoError(Exception):
    pass


class GeometryError(TetrageoError):
    """Invalid or infeasible geometric input."""


class DegenerateInput(GeometryError):
    """Four points are coplanar within tolerance."""


class MetricInfeasible(GeometryError):
    """Six edge lengths do not embed as a (possibly flat) tetrahedron."""


class SamplerExhausted(GeometryError):
    """Rejection sampling failed within its budget."""


class NonConvexPolygon(GeometryError):
    pass


class DepthInsufficient(GeometryError):
    """Exhaustive search depth too small to reach the target."""


class NonGenericPosition(GeometryError):
    """A source point with tied vertex segments; the star unfolding of
    Lemma-type hypotheses needs unique segments.  Callers may retry with a
    jittered point (documented jitter: 1e-7 x diameter)."""


class MalformedVoronoi(TetrageoError):
    """Clipped Voronoi diagram is not a tree; tolerance breakdown."""


class UnclassifiableTree(TetrageoError):
    """Cut-locus tree with a node of degree > 4 (impossible with 4 leaves)."""


class InapplicableCensus(GeometryError):
    """Census does not satisfy the preconditions of the requested classifier."""


class BudgetExhausted(GeometryError):
    """Search budget spent without reaching the success criterion.

    Carries the best result found so far in ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class LengthMismatch(GeometryError):
    """Paired sides of a glued polygon have different lengths."""


class AngleExcess(GeometryError):
    """More than 2*pi of angle glued at a point (Alexandrov condition fails)."""


class NotASphere(GeometryError):
    """Side identifications do not produce a topological sphere."""


class WrongConeCount(GeometryError):
    """Gluing does not have exactly four cone points."""


class ParamOutOfRange(GeometryError):
    pass


class SolveFailed(GeometryError):
    """A one-dimensional root solve did not converge; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EmptyInput(GeometryError):
    pass


class InternalError(TetrageoError):
    """A guard tripped; indicates a bug rather than bad input."""


class SearchCapExceeded(InternalError):
    """Geodesic search crossed more than the hard cap of 64 edges."""


class WalkThroughVertex(InternalError):
    """A straight walk hit a cone point; the caller should treat the sample
    as unusable rather than step over the vertex."""
