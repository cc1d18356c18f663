"""Curves making a constant angle with the unit circle or with the rotation field.

Three generators:

* :func:`curve_vs_circle` - planar curves whose tangent makes a fixed angle
  with the tangent of a reparametrized unit circle (sigma(s)).
* :func:`planar_killing_curve` - the closed-form planar solutions for the
  rotation field -y d_x + x d_y: centred circles, lines through the origin,
  logarithmic spirals.
* :func:`spatial_killing_curve` - the general spatial solution, obtained
  from a free function omega(s) by three quadratures in cylindrical
  coordinates.

All quadratures run on a uniform grid with :func:`cumulative_simpson`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import cyl_to_cart, CylPoint
from .errors import DomainViolation, InvalidRange, OriginOnCurve, RadiusNonPositive
from .quadrature import cumulative_simpson

ORIGIN_EPS = 1e-12
ARCCOS_MARGIN = 1e-6


@dataclass(frozen=True)
class Polyline3:
    """Sampled space curve: parameter values ``s`` and points, shape (n, 3)."""

    s: np.ndarray
    points: np.ndarray
    closed: bool = False

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float).reshape(-1)
        pts = np.asarray(self.points, dtype=float).reshape(-1, 3)
        if s.shape[0] != pts.shape[0]:
            raise ValueError("s and points must have the same length")
        if s.size > 1 and np.any(np.diff(s) <= 0):
            raise ValueError("s must be strictly increasing")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return self.s.shape[0]

    def rotated(self, angle: float) -> "Polyline3":
        """Counter-clockwise rotation by ``angle`` about the z-axis."""
        c, sn = math.cos(angle), math.sin(angle)
        R = np.array([[c, -sn, 0.0], [sn, c, 0.0], [0.0, 0.0, 1.0]])
        return Polyline3(self.s, self.points @ R.T, self.closed)


def _grid(s_range, n, min_n=3):
    a, b = (float(t) for t in s_range)
    if not (math.isfinite(a) and math.isfinite(b)) or b <= a:
        raise InvalidRange(f"degenerate parameter range [{a}, {b}]")
    if n < min_n:
        raise InvalidRange(f"need at least {min_n} samples, got {n}")
    return np.linspace(a, b, int(n))


def central_tangents(c: Polyline3):
    """Derivative d p / d s at the interior samples.

    Uniform grids use the 5-point stencil (fourth order, samples 2..n-3);
    anything else falls back to ``np.gradient`` (second order, 1..n-2).
    Returns ``(indices, derivatives)``.
    """
    s, p = c.s, c.points
    n = len(s)
    ds = np.diff(s)
    if n >= 5 and np.allclose(ds, ds[0], rtol=1e-9, atol=0.0):
        h = (s[-1] - s[0]) / (n - 1)
        d = (p[:-4] - 8.0 * p[1:-3] + 8.0 * p[3:-1] - p[4:]) / (12.0 * h)
        return np.arange(2, n - 2), d
    if n < 3:
        raise ValueError("need at least 3 samples for tangents")
    d = np.gradient(p, s, axis=0, edge_order=2)
    return np.arange(1, n - 1), d[1:-1]


def arclength_defect(c: Polyline3) -> float:
    """max over segments of |chord / delta_s - 1|."""
    if len(c) < 2:
        raise ValueError("need at least 2 samples")
    chords = np.linalg.norm(np.diff(c.points, axis=0), axis=1)
    return float(np.max(np.abs(chords / np.diff(c.s) - 1.0)))


# --- curves against the unit circle -------------------------------------------------


def curve_vs_circle(sigma: Callable, theta: float, s_range, n: int) -> Polyline3:
    """Planar curve making angle ``theta`` with the circle (cos sigma, sin sigma).

    gamma = (sin t C - cos t S, cos t C + sin t S) with C, S the running
    integrals of cos sigma and sin sigma from the left end of ``s_range``.
    The result is the theta = 0 curve turned clockwise by theta.
    """
    s = _grid(s_range, n)
    ds = s[1] - s[0]
    sig = np.asarray(sigma(s), dtype=float) * np.ones_like(s)
    C = cumulative_simpson(np.cos(sig), ds)
    S = cumulative_simpson(np.sin(sig), ds)
    st, ct = math.sin(theta), math.cos(theta)
    pts = np.stack([st * C - ct * S, ct * C + st * S, np.zeros_like(s)], axis=-1)
    return Polyline3(s, pts)


def circle_tangent(sigma: Callable, s) -> np.ndarray:
    """Unit tangent (-sin sigma, cos sigma, 0) of the reparametrized circle."""
    sig = np.asarray(sigma(np.asarray(s, dtype=float)), dtype=float)
    return np.stack([-np.sin(sig), np.cos(sig), np.zeros_like(sig)], axis=-1)


# --- planar curves for the rotation field -------------------------------------------


@dataclass(frozen=True)
class Circle:
    r0: float

    def __post_init__(self):
        if not self.r0 > 0:
            raise DomainViolation("circle radius must be positive")


@dataclass(frozen=True)
class Line:
    direction: float  # polar angle of the line through the origin


@dataclass(frozen=True)
class LogSpiral:
    theta: float
    phi0: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.theta < math.pi / 2:
            raise DomainViolation("log spiral angle must lie in (0, pi/2)")


def log_spiral_radius(theta: float, phi, phi0: float = 0.0):
    """r(phi) = exp(tan(theta) (phi - phi0))."""
    return np.exp(math.tan(theta) * (np.asarray(phi, dtype=float) - phi0))


def planar_killing_curve(kind, rng, n: int) -> Polyline3:
    """Closed-form planar curve making constant angle with the rotation field.

    ``rng`` is in the natural parameter of ``kind``: polar angle for
    :class:`Circle` and :class:`LogSpiral`, signed distance from the origin
    for :class:`Line`. Samples are uniform in arc length; for the spiral the
    arc length is measured from the pole, so r = s sin(theta).
    """
    a, b = (float(t) for t in rng)
    if b <= a:
        raise InvalidRange(f"degenerate parameter range [{a}, {b}]")
    if n < 2:
        raise InvalidRange("need at least 2 samples")

    if isinstance(kind, Circle):
        phi = np.linspace(a, b, n)
        s = kind.r0 * phi
        pts = cyl_to_cart(CylPoint(kind.r0, phi, 0.0))
        closed = abs((b - a) - 2 * math.pi) < 1e-12
        return Polyline3(s, pts, closed)

    if isinstance(kind, Line):
        if a <= 0.0 <= b:
            raise OriginOnCurve("line segment passes through the origin")
        s = np.linspace(a, b, n)
        direction = np.array([math.cos(kind.direction), math.sin(kind.direction), 0.0])
        pts = s[:, None] * direction
        if np.min(np.abs(s)) < ORIGIN_EPS:
            raise OriginOnCurve("sample on the z-axis")
        return Polyline3(s, pts)

    if isinstance(kind, LogSpiral):
        st = math.sin(kind.theta)
        r_a, r_b = log_spiral_radius(kind.theta, [a, b], kind.phi0)
        s = np.linspace(r_a / st, r_b / st, n)
        r = s * st
        if np.min(r) < ORIGIN_EPS:
            raise OriginOnCurve("spiral sample at the pole")
        phi = kind.phi0 + np.log(r) / math.tan(kind.theta)
        phi[0], phi[-1] = a, b
        return Polyline3(s, cyl_to_cart(CylPoint(r, phi, 0.0)))

    raise TypeError(f"unknown planar curve kind {kind!r}")


# --- spatial curves -----------------------------------------------------------------


class OmegaSpec:
    """The free function omega(s) of the spatial solution.

    Named variants know a canonical antiderivative of cos(omega) and
    sin(omega); its value at the left end of the grid fixes the integration
    constants of r and z. :class:`Custom` has none, so its integrals start
    at zero there.
    """

    def __call__(self, s):
        raise NotImplementedError

    def antiderivatives(self, s: float) -> tuple[float, float]:
        return 0.0, 0.0

    def clip_range(self, a: float, b: float) -> tuple[float, float]:
        return a, b


@dataclass(frozen=True)
class Constant(OmegaSpec):
    omega0: float

    def __call__(self, s):
        return np.full_like(np.asarray(s, dtype=float), self.omega0)

    def antiderivatives(self, s):
        return s * math.cos(self.omega0), s * math.sin(self.omega0)


@dataclass(frozen=True)
class Affine(OmegaSpec):
    m: float
    n: float = 0.0

    def __post_init__(self):
        if self.m == 0:
            raise DomainViolation("affine omega needs m != 0 (use Constant)")

    def __call__(self, s):
        return self.m * np.asarray(s, dtype=float) + self.n

    def antiderivatives(self, s):
        w = self.m * s + self.n
        return math.sin(w) / self.m, -math.cos(w) / self.m


@dataclass(frozen=True)
class ArcCos(OmegaSpec):
    def __call__(self, s):
        return np.arccos(np.asarray(s, dtype=float))

    def antiderivatives(self, s):
        root = math.sqrt(1.0 - s * s)
        return 0.5 * s * s, 0.5 * (s * root + math.asin(s))

    def clip_range(self, a, b):
        lo, hi = -1.0 + ARCCOS_MARGIN, 1.0 - ARCCOS_MARGIN
        if b <= lo or a >= hi:
            raise InvalidRange("arccos omega needs s inside (-1, 1)")
        return max(a, lo), min(b, hi)


@dataclass(frozen=True)
class Custom(OmegaSpec):
    fn: Callable = field(compare=False)

    def __call__(self, s):
        return np.asarray(self.fn(np.asarray(s, dtype=float)), dtype=float)


def spatial_killing_curve(omega: OmegaSpec, theta: float, r0: float, s_range, n: int) -> Polyline3:
    """Spatial curve making angle ``theta`` with the rotation field.

    r = r0 + sin(theta) int cos(omega), z = sin(theta) int sin(omega),
    phi = cos(theta) int 1/r. The phi integral starts at 0 at the left end
    of the grid (a rotation about the z-axis); the r and z integrals start
    at the canonical antiderivative of ``omega``.
    """
    if not 0.0 < theta < math.pi / 2:
        raise DomainViolation("theta must lie in (0, pi/2)")
    a, b = omega.clip_range(*(float(t) for t in s_range))
    s = _grid((a, b), n)
    ds = s[1] - s[0]
    w = omega(s)
    c0, s0 = omega.antiderivatives(a)
    st, ct = math.sin(theta), math.cos(theta)
    r = r0 + st * (cumulative_simpson(np.cos(w), ds) + c0)
    bad = np.nonzero(r <= 0.0)[0]
    if bad.size:
        raise RadiusNonPositive(s[bad[0]])
    z = st * (cumulative_simpson(np.sin(w), ds) + s0)
    phi = ct * cumulative_simpson(1.0 / r, ds)
    return Polyline3(s, cyl_to_cart(CylPoint(r, phi, z)))
