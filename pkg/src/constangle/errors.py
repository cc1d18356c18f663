"""Exception types raised by the geometry kernel.

Everything derives from :class:`GeometryError` so callers (the CLI in
particular) can map any domain or math failure to a single exit code.
"""


class GeometryError(ValueError):
    """Base class for domain and numerical failures."""


class ZeroVector(GeometryError):
    pass


class InvalidRange(GeometryError):
    pass


class OriginOnCurve(GeometryError):
    pass


class RadiusNonPositive(GeometryError):
    def __init__(self, s):
        self.s = float(s)
        super().__init__(f"radius became non-positive at s={self.s:.17g}")


class DomainTouchesAxis(GeometryError):
    pass


class DomainViolation(GeometryError):
    pass


class SignError(GeometryError):
    pass


class TooCloseToBoundary(GeometryError):
    pass


class DegeneratePoint(GeometryError):
    pass


class AxisPoint(GeometryError):
    pass


class KillingFieldVanishes(GeometryError):
    def __init__(self, p):
        self.p = tuple(float(t) for t in p)
        super().__init__(f"Killing field vanishes at p={self.p}")


class DegenerateGrid(GeometryError):
    pass
