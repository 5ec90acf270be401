"""Exception taxonomy.

Every geometric failure derives from :class:`GeometryError`; the CLI maps
those to exit code 3 and prints the class name.  Malformed input files raise
:class:`SceneError` (exit code 2).
"""


class GeometryError(Exception):
    """Base class for geometric failures."""


class SceneError(ValueError):
    """Malformed scene or arc file."""


class DegenerateSpan(GeometryError):
    pass


class LightLikeChord(GeometryError):
    pass


class PoleInRange(GeometryError):
    pass


class NonSpaceLikeChord(GeometryError):
    pass


class AsymmetricPolygon(GeometryError):
    pass


class NoPositiveSolution(GeometryError):
    pass


class LightLikeTangent(GeometryError):
    pass


class TimeLikeTangent(GeometryError):
    pass


class LightLikeInterior(GeometryError):
    pass


class CuspInRange(GeometryError):
    pass


class MaxDepthExceeded(GeometryError):
    pass


class OpenChain(GeometryError):
    """Kept sub-arcs could not be chained into closed loops.

    ``gaps`` lists the dangling endpoint pairs.
    """

    def __init__(self, message, gaps=()):
        super().__init__(message)
        self.gaps = list(gaps)


class OverlappingSupports(GeometryError):
    """Two arcs share a support and overlap along a stretch.

    ``points`` are the endpoints of the shared stretch.
    """

    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = list(points)


class SeedGridTooCoarse(UserWarning):
    """Emitted when traced branches leave unmatched boundary seeds."""
