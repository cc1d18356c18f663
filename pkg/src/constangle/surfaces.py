"""Generators for the surfaces making constant angle with the rotation field.

Four families: halfplanes bounded by the z-axis (angle 0), rotational
surfaces about the z-axis (angle pi/2), right cylinders over logarithmic
spirals, and Dini's surfaces. All are built in cylindrical coordinates and
carry a closed-form 2-jet, except rotational surfaces given by a bare
profile callable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import CylPoint, cyl_to_cart, cyl_vector_to_cart
from .diffgeo import CylJet, jet
from .errors import DegeneratePoint, DomainTouchesAxis, DomainViolation, SignError

DINI_MARGIN = 0.1
IMMERSION_TOL = 1e-10
_BAND_SLACK = 1e-12


@dataclass(frozen=True)
class ParamSurface:
    """A parametrized surface patch over the rectangle ``domain``.

    ``evaluate(u, v)`` and ``jet_fn(u, v)`` are vectorized over arrays of
    parameters; ``jet_fn`` is None when only finite differences are
    available.
    """

    family: str
    params: dict
    domain: tuple[float, float, float, float]
    evaluate: Callable = field(repr=False)
    jet_fn: Callable | None = field(default=None, repr=False)

    def __call__(self, u, v):
        return self.evaluate(np.asarray(u, dtype=float), np.asarray(v, dtype=float))

    def sample_grid(self, nu: int, nv: int, interior: bool = True):
        """Parameter grid, shape (nu, nv) each; ``interior`` uses cell centres."""
        u0, u1, v0, v1 = self.domain
        if interior:
            us = u0 + (np.arange(nu) + 0.5) * (u1 - u0) / nu
            vs = v0 + (np.arange(nv) + 0.5) * (v1 - v0) / nv
        else:
            us = np.linspace(u0, u1, nu)
            vs = np.linspace(v0, v1, nv)
        return np.meshgrid(us, vs, indexing="ij")


def _surface_from_cyl(family, params, domain, cyl_jet_fn):
    def evaluate(u, v):
        j = cyl_jet_fn(u, v)
        return cyl_to_cart(CylPoint(j.P[..., 0], j.P[..., 1], j.P[..., 2]))

    def jet_fn(u, v):
        return cyl_jet_fn(u, v).to_cartesian()

    return ParamSurface(family, params, tuple(float(t) for t in domain), evaluate, jet_fn)


def _stack(*cols):
    cols = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in cols))
    return np.stack(cols, axis=-1)


def _check_domain(domain):
    u0, u1, v0, v1 = (float(t) for t in domain)
    if not (u1 > u0 and v1 > v0):
        raise DomainViolation(f"empty parameter rectangle {domain}")
    return u0, u1, v0, v1


def check_immersion(S: ParamSurface, nu: int = 16, nv: int = 16, analytic: bool = True) -> float:
    """Smallest |F_u x F_v| over a grid; raises if the patch is not immersed off the axis."""
    U, V = S.sample_grid(nu, nv)
    j = jet(S, U, V, analytic=analytic)
    if np.min(np.hypot(j.F[..., 0], j.F[..., 1])) <= 0.0:
        raise DomainTouchesAxis("surface meets the z-axis")
    smallest = float(np.min(np.linalg.norm(np.cross(j.Fu, j.Fv), axis=-1)))
    if smallest <= IMMERSION_TOL:
        raise DegeneratePoint(f"not an immersion: |F_u x F_v| = {smallest:.3g}")
    return smallest


# --- theta = 0 ----------------------------------------------------------------------


def halfplane(phi0: float = 0.0, domain=(0.5, 2.0, -1.0, 1.0)) -> ParamSurface:
    """F(u, v) = (u cos phi0, u sin phi0, v), u > 0."""
    u0, u1, v0, v1 = _check_domain(domain)
    if u0 <= 0.0:
        raise DomainTouchesAxis("halfplane needs u > 0")

    def cyl(u, v):
        zero = np.zeros(np.broadcast(u, v).shape)
        return CylJet(
            P=_stack(u + zero, phi0 + zero, v + zero),
            Pu=_stack(1.0 + zero, zero, zero),
            Pv=_stack(zero, zero, 1.0 + zero),
            Puu=_stack(zero, zero, zero),
            Puv=_stack(zero, zero, zero),
            Pvv=_stack(zero, zero, zero),
        )

    return _surface_from_cyl("halfplane", {"phi0": phi0}, (u0, u1, v0, v1), cyl)


# --- theta = pi/2 -------------------------------------------------------------------


def rotational_surface(
    profile: Callable,
    domain=(0.5, 2.0, 0.0, 2 * math.pi),
    dprofile: Callable | None = None,
    d2profile: Callable | None = None,
    family: str = "rotational",
    params: dict | None = None,
) -> ParamSurface:
    """F(u, v) = (u cos v, u sin v, profile(u)).

    Pass both profile derivatives to get a closed-form jet; otherwise the
    surface falls back to finite differences.
    """
    u0, u1, v0, v1 = _check_domain(domain)
    if u0 <= 0.0:
        raise DomainTouchesAxis("rotational surface needs u > 0")
    params = dict(params or {})

    def evaluate(u, v):
        u, v = np.broadcast_arrays(u, v)
        return _stack(u * np.cos(v), u * np.sin(v), profile(u))

    if dprofile is None or d2profile is None:
        return ParamSurface(family, params, (u0, u1, v0, v1), evaluate, None)

    def cyl(u, v):
        u, v = np.broadcast_arrays(u, v)
        zero = np.zeros(u.shape)
        return CylJet(
            P=_stack(u, v, profile(u)),
            Pu=_stack(1.0 + zero, zero, dprofile(u)),
            Pv=_stack(zero, 1.0 + zero, zero),
            Puu=_stack(zero, zero, d2profile(u)),
            Puv=_stack(zero, zero, zero),
            Pvv=_stack(zero, zero, zero),
        )

    return _surface_from_cyl(family, params, (u0, u1, v0, v1), cyl)


def catenoid(scale: float = 1.0, domain=None) -> ParamSurface:
    """Upper half of the catenoid u = a cosh(z / a) about the z-axis.

    The profile z = a arcosh(u / a) has a vertical tangent at the waist
    u = a, so the u-interval must start strictly above ``scale``.
    """
    a = float(scale)
    if a <= 0.0:
        raise DomainViolation("catenoid scale must be positive")
    if domain is None:
        domain = (1.1 * a, 3.0 * a, 0.0, 2 * math.pi)
    if domain[0] <= a:
        raise DomainViolation("catenoid chart needs u > scale (waist excluded)")

    def z(u):
        return a * np.arccosh(u / a)

    def dz(u):
        return 1.0 / np.sqrt((u / a) ** 2 - 1.0)

    def d2z(u):
        w = u / a
        return -w / (a * ((w * w - 1.0) ** 1.5))

    return rotational_surface(z, domain, dz, d2z, family="rotational", params={"profile": "catenoid", "scale": a})


# --- right cylinders over log spirals ------------------------------------------------


def _check_theta(theta):
    if not 0.0 < theta < math.pi / 2:
        raise DomainViolation(f"theta must lie in (0, pi/2), got {theta}")


def logspiral_cylinder(theta: float, c: float = 1.0, domain=(0.5, 3.0, -1.0, 1.0)) -> ParamSurface:
    """Cylindrical (r, phi, z) = (u cos theta, log c - tan theta log u, z)."""
    _check_theta(theta)
    if not c > 0.0:
        raise DomainViolation("log-spiral cylinder needs c > 0")
    u0, u1, v0, v1 = _check_domain(domain)
    if u0 <= 0.0:
        raise DomainTouchesAxis("log-spiral cylinder needs u > 0")
    ct, tt, logc = math.cos(theta), math.tan(theta), math.log(c)

    def cyl(u, v):
        u, v = np.broadcast_arrays(u, v)
        zero = np.zeros(u.shape)
        return CylJet(
            P=_stack(u * ct, logc - tt * np.log(u), v),
            Pu=_stack(ct + zero, -tt / u, zero),
            Pv=_stack(zero, zero, 1.0 + zero),
            Puu=_stack(zero, tt / u**2, zero),
            Puv=_stack(zero, zero, zero),
            Pvv=_stack(zero, zero, zero),
        )

    return _surface_from_cyl("logspiral_cylinder", {"theta": theta, "c": c}, (u0, u1, v0, v1), cyl)


# --- Dini's surface -----------------------------------------------------------------


def dini_band(c: float, eps: float = DINI_MARGIN) -> tuple[float, float]:
    """Admissible u-interval: c u in [eps, pi/2 - eps]."""
    return eps / c, (math.pi / 2 - eps) / c


def _check_dini(theta, c):
    _check_theta(theta)
    if c == 0.0:
        raise DomainViolation("Dini's surface needs c != 0")
    if c < 0.0:
        raise SignError("Dini generator takes c > 0; the radius cos(theta) sin(cu)/c would be negative")


def _check_band(c, u, eps):
    lo, hi = dini_band(c, eps)
    u = np.asarray(u, dtype=float)
    if np.any(u < lo - _BAND_SLACK) or np.any(u > hi + _BAND_SLACK):
        raise DomainViolation(f"u outside the admissible band [{lo:.6g}, {hi:.6g}]")


def dini_cyl_jet(theta: float, c: float, u, v, signed: bool = False) -> CylJet:
    """Closed-form cylindrical jet of Dini's surface.

    r = cos(theta) sin(cu)/c,
    phi = -c v tan(theta)/cos(theta) - tan(theta) log tan(cu/2),
    z = v - cos(theta) cos(cu)/c.

    ``signed=True`` uses the signed radius mu = -r instead, the
    convention of the frame quantities (same surface turned by pi about
    the z-axis).
    """
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    ct, tt = math.cos(theta), math.tan(theta)
    cu = c * u
    s, co = np.sin(cu), np.cos(cu)
    zero = np.zeros(u.shape)
    sign = -1.0 if signed else 1.0
    return CylJet(
        P=_stack(sign * ct * s / c, -c * v * tt / ct - tt * np.log(np.tan(cu / 2)), v - ct * co / c),
        Pu=_stack(sign * ct * co, -c * tt / s, ct * s),
        Pv=_stack(zero, -c * tt / ct + zero, 1.0 + zero),
        Puu=_stack(-sign * c * ct * s, c * c * tt * co / s**2, c * ct * co),
        Puv=_stack(zero, zero, zero),
        Pvv=_stack(zero, zero, zero),
    )


def dini_surface(theta: float, c: float = 1.0, domain=None, eps: float = DINI_MARGIN) -> ParamSurface:
    """Dini's surface with angle ``theta`` and constant ``c > 0``.

    The default domain is the full admissible u-band and one turn of the
    v-helices, v in [0, 2 pi cos(theta) / (c tan(theta))].
    """
    _check_dini(theta, c)
    if domain is None:
        lo, hi = dini_band(c, eps)
        domain = (lo, hi, 0.0, 2 * math.pi * math.cos(theta) / (c * math.tan(theta)))
    u0, u1, v0, v1 = _check_domain(domain)
    _check_band(c, [u0, u1], eps)

    def cyl(u, v):
        return dini_cyl_jet(theta, c, u, v)

    return _surface_from_cyl("dini", {"theta": theta, "c": c, "eps": eps}, (u0, u1, v0, v1), cyl)


def helicoidal_form(theta: float, c: float):
    """Pitch h and profile Lambda of Dini's surface as a helicoidal surface.

    The surface is (r cos phi, r sin phi, h phi + Lambda(r)) with
    h = -cos(theta) / (c tan(theta)). Lambda is returned as a function of r
    on the admissible branch cu in (0, pi/2).
    """
    _check_theta(theta)
    if c == 0.0:
        raise DomainViolation("c must be nonzero")
    ct = math.cos(theta)
    pitch = -ct / (c * math.tan(theta))

    def profile(r):
        cu = np.arcsin(np.clip(c * np.asarray(r, dtype=float) / ct, -1.0, 1.0))
        return -(ct / c) * (np.log(np.tan(cu / 2)) + np.cos(cu))

    return pitch, profile


def helicoidal_point(pitch: float, profile: Callable, r, phi) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return _stack(r * np.cos(phi), r * np.sin(phi), pitch * phi + profile(r))


@dataclass(frozen=True)
class DiniGeometry:
    """Intrinsic quantities of Dini's surface at one parameter point.

    ``mu`` is the signed norm function -cos(theta) sin(cu)/c, so that
    |V| = -mu; ``r = |mu|`` is the cylindrical radius of the surface.
    Frame vectors are stored as (d_r, d_phi, d_z) components at the surface
    point and in Cartesian form. The radial components carry the sign that
    matches the r = |mu| orientation, so ``e1`` equals F_u exactly.
    The second-form values ``h11, h12, h22`` are in the (d_u, d_v) chart
    basis; ``A11, A22`` are shape-operator entries in the (e1, e2) frame.
    """

    theta: float
    c: float
    u: float
    v: float
    psi: float
    mu: float
    r: float
    lam: float
    a: float
    b: float
    e1: np.ndarray
    e2: np.ndarray
    N: np.ndarray
    e1_cart: np.ndarray
    e2_cart: np.ndarray
    N_cart: np.ndarray
    cos_normal_k: float
    cos_e1_k: float
    A11: float
    A22: float
    h11: float
    h12: float
    h22: float

    @property
    def K(self) -> float:
        return self.A11 * self.A22

    def warped_gram(self) -> np.ndarray:
        """Gram matrix of (e1, e2, N) under dr^2 + r^2 dphi^2 + dz^2."""
        g = np.diag([1.0, self.r**2, 1.0])
        frame = np.stack([self.e1, self.e2, self.N])
        return frame @ g @ frame.T


def dini_geometry(theta: float, c: float, u: float, v: float, eps: float = DINI_MARGIN) -> DiniGeometry:
    _check_dini(theta, c)
    _check_band(c, u, eps)
    st, ct, tt = math.sin(theta), math.cos(theta), math.tan(theta)
    psi = c * u
    sp, cp = math.sin(psi), math.cos(psi)
    mu = -ct * sp / c
    r = -mu
    lam = -c * tt * math.tan(psi)
    e1 = np.array([ct * cp, st / mu, ct * sp])
    e2 = np.array([-sp, 0.0, cp])
    N = np.array([-st * cp, ct / mu, -st * sp])
    phi = -c * v * tt / ct - tt * math.log(math.tan(psi / 2))
    p = CylPoint(r, phi, v - ct * cp / c)
    return DiniGeometry(
        theta=theta,
        c=c,
        u=u,
        v=v,
        psi=psi,
        mu=mu,
        r=r,
        lam=lam,
        a=-math.tan(psi) / ct,
        b=1.0 / cp,
        e1=e1,
        e2=e2,
        N=N,
        e1_cart=cyl_vector_to_cart(p, e1),
        e2_cart=cyl_vector_to_cart(p, e2),
        N_cart=cyl_vector_to_cart(p, N),
        cos_normal_k=-st * sp,
        cos_e1_k=ct * sp,
        A11=-st * cp / mu,
        A22=lam,
        h11=c * tt / math.tan(psi),
        h12=c * tt * cp / ct,
        h22=c * tt**3 * sp * cp,
    )


def surface_from_function(f: Callable, domain, family: str = "custom", params: dict | None = None) -> ParamSurface:
    """Wrap an arbitrary vectorized evaluator (finite-difference jets only)."""
    return ParamSurface(family, dict(params or {}), tuple(float(t) for t in _check_domain(domain)), f, None)


def surface_from_grid(points, domain, family: str = "sampled") -> ParamSurface:
    """Interpolate a sampled (nu, nv, 3) grid with bicubic splines.

    The samples are taken to lie on a uniform inclusive grid over
    ``domain``. Jets come from finite differences of the spline.
    """
    from scipy.interpolate import RectBivariateSpline

    pts = np.asarray(points, dtype=float)
    if pts.ndim != 3 or pts.shape[2] != 3 or min(pts.shape[:2]) < 4:
        raise DomainViolation("sampled surface needs a (nu, nv, 3) grid with nu, nv >= 4")
    u0, u1, v0, v1 = _check_domain(domain)
    us = np.linspace(u0, u1, pts.shape[0])
    vs = np.linspace(v0, v1, pts.shape[1])
    splines = [RectBivariateSpline(us, vs, pts[..., k], kx=3, ky=3, s=0) for k in range(3)]

    def evaluate(u, v):
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        return np.stack([sp(u, v, grid=False) for sp in splines], axis=-1)

    return ParamSurface(family, {}, (u0, u1, v0, v1), evaluate, None)

