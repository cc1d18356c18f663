"""Numerical checks of the constant-angle claims and a family classifier."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import KillingField, angle_between, fold_angle
from .curves import Polyline3, central_tangents
from .diffgeo import CylJet, curvatures, fundamental_forms, jet, unit_normal
from .errors import DegenerateGrid, DomainViolation, KillingFieldVanishes
from .surfaces import ParamSurface, _check_band, _check_dini, dini_cyl_jet, surface_from_grid

TOL_ANGLE_ANALYTIC = 1e-4
TOL_ANGLE_FD = 1e-3
TOL_K = 1e-3
VANISH_TOL = 1e-12

HALFPLANE = "halfplane"
ROTATIONAL = "rotational"
LOGSPIRAL_CYLINDER = "logspiral_cylinder"
DINI = "dini"
NOT_CONSTANT_ANGLE = "not_constant_angle"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class AngleReport:
    samples: int
    theta_mean: float
    theta_max_dev: float
    fold_applied: bool
    angles: np.ndarray

    def max_dev_from(self, theta: float) -> float:
        return float(np.max(np.abs(self.angles - theta)))


def _summarize(angles: np.ndarray, folded: bool) -> AngleReport:
    flat = np.ascontiguousarray(angles, dtype=float).reshape(-1)
    mean = float(np.mean(flat))
    return AngleReport(flat.size, mean, float(np.max(np.abs(flat - mean))), folded, flat)


def _field_at(V: KillingField, p: np.ndarray) -> np.ndarray:
    w = V(p)
    scale = np.maximum(1.0, np.linalg.norm(p, axis=-1))
    bad = np.linalg.norm(w, axis=-1) < VANISH_TOL * scale
    if np.any(bad):
        raise KillingFieldVanishes(p[bad][0])
    return w


def surface_angle_report(
    S: ParamSurface,
    V: KillingField | None = None,
    nu: int = 32,
    nv: int = 32,
    analytic: bool = True,
    flip: bool = False,
) -> AngleReport:
    """Folded angle between V and the unit normal over an interior nu x nv grid.

    ``flip`` reverses the normal orientation (used to check fold invariance).
    """
    if nu < 3 or nv < 3:
        raise DegenerateGrid("angle report needs at least a 3 x 3 grid")
    V = V or KillingField.rot_z()
    U, W = S.sample_grid(nu, nv)
    j = jet(S, U, W, analytic=analytic)
    if flip:
        j = j.flipped()
    alpha = angle_between(_field_at(V, j.F), unit_normal(j))
    return _summarize(fold_angle(alpha), True)


def curve_angle_report(c: Polyline3, V: KillingField | None = None) -> AngleReport:
    """Oriented angle between the tangent and V at the interior samples."""
    if len(c) < 3:
        raise DegenerateGrid("curve angle report needs at least 3 samples")
    V = V or KillingField.rot_z()
    idx, T = central_tangents(c)
    alpha = angle_between(T, _field_at(V, c.points[idx]))
    return _summarize(np.atleast_1d(alpha), False)


# --- Dini PDE systems --------------------------------------------------------------


def cyl_pde_residuals(j: CylJet, theta: float, c: float, u) -> np.ndarray:
    """LHS - RHS of the nine second-order equations for Dini's surface.

    Rows (last axis): the d_u d_u system (r, phi, z components), then
    d_u d_v, then d_v d_v. The jet must be in the signed-radius chart
    r = mu (see :func:`dini_cyl_jet` with ``signed=True``).
    """
    ct, tt, st = math.cos(theta), math.tan(theta), math.sin(theta)
    cu = c * np.asarray(u, dtype=float)
    s, co = np.sin(cu), np.cos(cu)
    r, pu_, pv_ = j.P[..., 0], j.Pu[..., 1], j.Pv[..., 1]
    ru, rv = j.Pu[..., 0], j.Pv[..., 0]
    res = [
        j.Puu[..., 0] - r * pu_**2 - (c * s / ct + c * st**2 * co**2 / (ct * s)),
        j.Puu[..., 1] + 2 * ru / r * pu_ - (-(c**2) * tt * co / s**2),
        j.Puu[..., 2] - c * ct * co,
        j.Puv[..., 0] - r * pu_ * pv_ - c * tt**2,
        j.Puv[..., 1] + (ru * pv_ + rv * pu_) / r - (-(c**2) * tt * (co / s) / ct),
        j.Puv[..., 2],
        j.Pvv[..., 0] - r * pv_**2 - c * tt**2 * s / ct,
        j.Pvv[..., 1] + 2 * rv / r * pv_,
        j.Pvv[..., 2],
    ]
    return np.stack(np.broadcast_arrays(*res), axis=-1)


def dini_pde_residuals(theta: float, c: float, u, v, eps: float = 0.1) -> np.ndarray:
    """The nine residuals at (u, v) for the closed-form Dini surface."""
    _check_dini(theta, c)
    _check_band(c, u, eps)
    return cyl_pde_residuals(dini_cyl_jet(theta, c, u, v, signed=True), theta, c, u)


def _frame_psi(S: ParamSurface, u, v):
    """psi = angle(e2, k) and the chart components of e1, recovered from geometry.

    e1 is the unit tangent part of V divided by the signed norm mu = -|V|,
    e2 = N x e1, so that V = mu (sin(theta) e1 + cos(theta) N).
    """
    j = jet(S, u, v)
    N = unit_normal(j)
    Vp = KillingField.rot_z()(j.F)
    T = Vp - np.sum(Vp * N, axis=-1)[..., None] * N
    e1 = -T / np.linalg.norm(T, axis=-1)[..., None]
    e2 = np.cross(N, e1)
    psi = np.arccos(np.clip(e2[..., 2], -1.0, 1.0))
    return psi, e1, j, -np.linalg.norm(Vp, axis=-1)


def psi_transport_residual(S: ParamSurface, theta: float, u: float, v: float, h: float = 1e-5) -> float:
    """e1(psi) + cos(theta) sin(psi) / mu at one point of a constant-angle surface.

    The derivative along e1 is a central difference in the chart direction
    whose image under dF is e1.
    """
    psi, e1, j, mu = _frame_psi(S, u, v)
    A = np.column_stack([j.Fu, j.Fv])
    xi, *_ = np.linalg.lstsq(A, e1, rcond=None)
    plus, *_ = _frame_psi(S, u + h * xi[0], v + h * xi[1])
    minus, *_ = _frame_psi(S, u - h * xi[0], v - h * xi[1])
    e1_psi = (float(plus) - float(minus)) / (2 * h)
    return e1_psi + math.cos(theta) * math.sin(float(psi)) / float(mu)


# --- parametric curves of Dini's surface -------------------------------------------


@dataclass(frozen=True)
class HelixCheck:
    radius: float
    pitch: float
    max_dev: float


@dataclass(frozen=True)
class SphereCheck:
    center_z: float
    radius: float
    max_dev: float
    center: np.ndarray
    speed_defect: float


def _require_u(S: ParamSurface, u0: float):
    u_lo, u_hi = S.domain[0], S.domain[1]
    if not u_lo <= u0 <= u_hi:
        raise DomainViolation(f"u0={u0} outside the surface domain [{u_lo}, {u_hi}]")


def helix_property_check(S: ParamSurface, u0: float, n: int = 129) -> HelixCheck:
    """Sample the v-curve u = u0 and fit r, z(v), phi(v).

    ``pitch`` is the signed rise in z per full turn of phi; ``max_dev`` the
    largest residual of the constant-radius and the two affine fits.
    """
    _require_u(S, u0)
    v = np.linspace(S.domain[2], S.domain[3], n)
    p = S(np.full_like(v, u0), v)
    r = np.hypot(p[:, 0], p[:, 1])
    phi = np.unwrap(np.arctan2(p[:, 1], p[:, 0]))
    z = p[:, 2]
    zfit = np.polyfit(v, z, 1)
    pfit = np.polyfit(v, phi, 1)
    radius = float(np.mean(r))
    dev = max(
        float(np.max(np.abs(r - radius))),
        float(np.max(np.abs(np.polyval(zfit, v) - z))),
        float(np.max(np.abs(np.polyval(pfit, v) - phi))),
    )
    return HelixCheck(radius, float(2 * math.pi * zfit[0] / pfit[0]), dev)


def fit_sphere(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares sphere |p - c|^2 = R^2 through the points."""
    A = np.column_stack([2 * points, np.ones(len(points))])
    b = np.sum(points**2, axis=1)
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    center = sol[:3]
    return center, float(math.sqrt(sol[3] + center @ center))


def sphere_property_check(S: ParamSurface, v0: float, n: int = 129) -> SphereCheck:
    """Distance of the u-curve v = v0 to (0, 0, v0), a free sphere fit and its speed."""
    if not S.domain[2] <= v0 <= S.domain[3]:
        raise DomainViolation(f"v0={v0} outside the surface domain")
    u = np.linspace(S.domain[0], S.domain[1], n)
    p = S(u, np.full_like(u, v0))
    dist = np.linalg.norm(p - np.array([0.0, 0.0, v0]), axis=1)
    radius = float(np.mean(dist))
    center, _ = fit_sphere(p)
    speed = np.linalg.norm(jet(S, u, np.full_like(u, v0)).Fu, axis=1)
    return SphereCheck(
        center_z=float(center[2]),
        radius=radius,
        max_dev=float(np.max(np.abs(dist - radius))),
        center=center,
        speed_defect=float(np.max(np.abs(speed - 1.0))),
    )


# --- classification -----------------------------------------------------------------


@dataclass(frozen=True)
class FamilyLabel:
    kind: str
    theta_hat: float | None = None
    c_hat: float | None = None
    angle_report: AngleReport | None = None
    K_mean: float | None = None
    K_stddev: float | None = None
    H_mean: float | None = None


def _wrap(angle):
    return (angle + math.pi) % (2 * math.pi) - math.pi


def _spiral_constant(points: np.ndarray, theta: float) -> float:
    """c from phi = log c - tan(theta) log(r / cos(theta)), on the principal branch."""
    r = np.hypot(points[..., 0], points[..., 1]).reshape(-1)
    phi = np.arctan2(points[..., 1], points[..., 0]).reshape(-1)
    logc = phi + math.tan(theta) * np.log(r / math.cos(theta))
    mean = math.atan2(float(np.mean(np.sin(logc))), float(np.mean(np.cos(logc))))
    return math.exp(_wrap(mean))


def classify_surface(
    S,
    V: KillingField | None = None,
    nu: int = 32,
    nv: int = 32,
    analytic: bool = True,
    domain=(0.0, 1.0, 0.0, 1.0),
) -> FamilyLabel:
    """Decide which constant-angle family a surface belongs to.

    ``S`` is a :class:`ParamSurface` or a sampled (nu, nv, 3) grid over
    ``domain`` (interpolated, finite-difference jets). Only geometry is
    used; the generator parameters are never read.
    """
    if not isinstance(S, ParamSurface):
        S = surface_from_grid(S, domain)
    if nu < 5 or nv < 5:
        raise DegenerateGrid("classification needs at least 5 x 5 samples")
    exact = analytic and S.jet_fn is not None
    tol = TOL_ANGLE_ANALYTIC if exact else TOL_ANGLE_FD

    rep = surface_angle_report(S, V, nu, nv, analytic=exact)
    U, W = S.sample_grid(nu, nv)
    j = jet(S, U, W, analytic=exact)
    curv = curvatures(fundamental_forms(j))
    K, H = curv.K.reshape(-1), curv.H.reshape(-1)
    stats = dict(
        angle_report=rep,
        K_mean=float(np.mean(K)),
        K_stddev=float(np.std(K)),
        H_mean=float(np.mean(H)),
    )

    if rep.theta_max_dev > tol:
        return FamilyLabel(NOT_CONSTANT_ANGLE, **stats)
    theta = rep.theta_mean
    if theta < tol:
        return FamilyLabel(HALFPLANE, theta, **stats)
    if abs(theta - math.pi / 2) < tol:
        return FamilyLabel(ROTATIONAL, theta, **stats)
    if theta < 10 * tol or math.pi / 2 - theta < 10 * tol:
        return FamilyLabel(UNKNOWN, theta, **stats)

    kscale = float(np.mean(np.maximum(curv.k1**2, curv.k2**2)))
    if float(np.max(np.abs(K))) <= TOL_K * kscale:
        return FamilyLabel(LOGSPIRAL_CYLINDER, theta, _spiral_constant(j.F, theta), **stats)
    K_mean = stats["K_mean"]
    if K_mean < 0 and stats["K_stddev"] <= TOL_K * abs(K_mean):
        return FamilyLabel(DINI, theta, math.sqrt(-K_mean) / math.tan(theta), **stats)
    return FamilyLabel(UNKNOWN, theta, **stats)
