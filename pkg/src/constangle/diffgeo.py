"""Surface 2-jets, fundamental forms, curvatures and the cylindrical connection.

All routines are vectorized: a jet may hold a single point (arrays of
shape (3,)) or a whole grid (shape (..., 3)).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CylPoint, cyl_vector_to_cart
from .errors import AxisPoint, DegeneratePoint, TooCloseToBoundary

FIRST_STEP = 1e-5
SECOND_STEP = 1e-3
DEGENERATE_DET = 1e-14
UMBILIC_TOL = 1e-9


@dataclass(frozen=True)
class SurfaceJet:
    F: np.ndarray
    Fu: np.ndarray
    Fv: np.ndarray
    Fuu: np.ndarray
    Fuv: np.ndarray
    Fvv: np.ndarray

    def flipped(self) -> "SurfaceJet":
        """Same surface with the v-direction reversed (normal flips sign)."""
        return SurfaceJet(self.F, self.Fu, -self.Fv, self.Fuu, -self.Fuv, self.Fvv)


@dataclass(frozen=True)
class CylJet:
    """Cylindrical components (r, phi, z) of an immersion and their partials.

    Each field is an array of shape (..., 3) ordered (r, phi, z).
    """

    P: np.ndarray
    Pu: np.ndarray
    Pv: np.ndarray
    Puu: np.ndarray
    Puv: np.ndarray
    Pvv: np.ndarray

    def to_cartesian(self) -> SurfaceJet:
        return cyl_jet_to_cart(self)


def cyl_jet_to_cart(j: CylJet) -> SurfaceJet:
    """Chain rule for (x, y) = r (cos phi, sin phi)."""
    r, ph, z = j.P[..., 0], j.P[..., 1], j.P[..., 2]
    ru, pu, zu = j.Pu[..., 0], j.Pu[..., 1], j.Pu[..., 2]
    rv, pv, zv = j.Pv[..., 0], j.Pv[..., 1], j.Pv[..., 2]
    ruu, puu, zuu = j.Puu[..., 0], j.Puu[..., 1], j.Puu[..., 2]
    ruv, puv, zuv = j.Puv[..., 0], j.Puv[..., 1], j.Puv[..., 2]
    rvv, pvv, zvv = j.Pvv[..., 0], j.Pvv[..., 1], j.Pvv[..., 2]
    c, s = np.cos(ph), np.sin(ph)

    def first(rd, pd, zd):
        return np.stack([rd * c - r * s * pd, rd * s + r * c * pd, zd], axis=-1)

    def second(ra, pa, rb, pb, rab, pab, zab):
        x = rab * c - (ra * pb + rb * pa) * s - r * c * pa * pb - r * s * pab
        y = rab * s + (ra * pb + rb * pa) * c - r * s * pa * pb + r * c * pab
        return np.stack([x, y, zab], axis=-1)

    return SurfaceJet(
        F=np.stack([r * c, r * s, z], axis=-1),
        Fu=first(ru, pu, zu),
        Fv=first(rv, pv, zv),
        Fuu=second(ru, pu, ru, pu, ruu, puu, zuu),
        Fuv=second(ru, pu, rv, pv, ruv, puv, zuv),
        Fvv=second(rv, pv, rv, pv, rvv, pvv, zvv),
    )


def _steps(u, v, h, h2):
    """Per-axis steps: each coordinate's step scales with max(1, |coordinate|)."""
    su, sv = np.maximum(1.0, np.abs(u)), np.maximum(1.0, np.abs(v))
    h = FIRST_STEP if h is None else h
    h2 = SECOND_STEP if h2 is None else h2
    return h * su, h * sv, h2 * su, h2 * sv


def fd_jet(f, u, v, h: float | None = None, h2: float | None = None) -> SurfaceJet:
    """Finite-difference 2-jet of a vectorized evaluator ``f(u, v) -> (..., 3)``.

    First partials: central differences with step ``h``. Pure second
    partials: 5-point stencil with step ``h2``; mixed: 4-corner stencils at
    ``h2`` and ``2 h2`` combined to fourth order.
    Default steps scale with max(1, |u|) along u and max(1, |v|) along v.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    hu, hv, ku, kv = _steps(u, v, h, h2)

    def e(x):
        return x[..., None]

    F = f(u, v)
    Fu = (f(u + hu, v) - f(u - hu, v)) / e(2 * hu)
    Fv = (f(u, v + hv) - f(u, v - hv)) / e(2 * hv)
    Fuu = (-f(u + 2 * ku, v) + 16 * f(u + ku, v) - 30 * F + 16 * f(u - ku, v) - f(u - 2 * ku, v)) / e(12 * ku**2)
    Fvv = (-f(u, v + 2 * kv) + 16 * f(u, v + kv) - 30 * F + 16 * f(u, v - kv) - f(u, v - 2 * kv)) / e(12 * kv**2)

    def corners(a, b):
        return f(u + a, v + b) - f(u + a, v - b) - f(u - a, v + b) + f(u - a, v - b)

    # Richardson combination of two 4-corner stencils cancels the k^2 term.
    Fuv = (16 * corners(ku, kv) - corners(2 * ku, 2 * kv)) / e(48 * ku * kv)
    return SurfaceJet(F, Fu, Fv, Fuu, Fuv, Fvv)


def jet(S, u, v, h: float | None = None, h2: float | None = None, analytic: bool = True) -> SurfaceJet:
    """2-jet of surface ``S`` at (u, v).

    Uses the surface's closed-form jet when it has one and ``analytic`` is
    set; otherwise finite differences, which need (u, v) at least two
    steps of each stencil inside the domain.
    """
    if analytic and getattr(S, "jet_fn", None) is not None:
        return S.jet_fn(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    hu, hv, ku, kv = _steps(u, v, h, h2)
    ru, rv = 2 * np.maximum(hu, ku), 2 * np.maximum(hv, kv)
    u0, u1, v0, v1 = S.domain
    if np.any(u - ru < u0) or np.any(u + ru > u1) or np.any(v - rv < v0) or np.any(v + rv > v1):
        raise TooCloseToBoundary("finite-difference stencil leaves the surface domain")
    return fd_jet(S.evaluate, u, v, h, h2)


@dataclass(frozen=True)
class FundamentalForms:
    E: np.ndarray
    Fm: np.ndarray
    G: np.ndarray
    L: np.ndarray
    M: np.ndarray
    N2: np.ndarray
    normal: np.ndarray

    def second_form_chart(self) -> np.ndarray:
        """Second form h(d_u, d_u), h(d_u, d_v), h(d_v, d_v) in the chart basis."""
        return np.stack([self.L, self.M, self.N2], axis=-1)


def unit_normal(j: SurfaceJet) -> np.ndarray:
    n = np.cross(j.Fu, j.Fv)
    norm = np.linalg.norm(n, axis=-1)
    if np.any(norm < 1e-300):
        raise DegeneratePoint("F_u x F_v vanishes")
    return n / norm[..., None]


def fundamental_forms(j: SurfaceJet) -> FundamentalForms:
    n = unit_normal(j)

    def dot(a, b):
        return np.sum(a * b, axis=-1)

    return FundamentalForms(
        E=dot(j.Fu, j.Fu),
        Fm=dot(j.Fu, j.Fv),
        G=dot(j.Fv, j.Fv),
        L=dot(j.Fuu, n),
        M=dot(j.Fuv, n),
        N2=dot(j.Fvv, n),
        normal=n,
    )


@dataclass(frozen=True)
class CurvatureReport:
    """Curvatures at one point or over a grid.

    ``d1``/``d2`` are the principal directions as (du, dv) chart components,
    unit length under the first fundamental form. At umbilics they are NaN
    and ``umbilic`` is True.
    """

    K: np.ndarray
    H: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    umbilic: np.ndarray


def shape_operator(f: FundamentalForms) -> np.ndarray:
    """Matrix of the Weingarten map in the chart basis, I^-1 II, shape (..., 2, 2)."""
    det = f.E * f.G - f.Fm**2
    if np.any(det <= DEGENERATE_DET):
        raise DegeneratePoint("first fundamental form is degenerate")
    a11 = (f.G * f.L - f.Fm * f.M) / det
    a12 = (f.G * f.M - f.Fm * f.N2) / det
    a21 = (f.E * f.M - f.Fm * f.L) / det
    a22 = (f.E * f.N2 - f.Fm * f.M) / det
    return np.stack([np.stack([a11, a12], -1), np.stack([a21, a22], -1)], -2)


def curvatures(f: FundamentalForms) -> CurvatureReport:
    W = shape_operator(f)
    det = f.E * f.G - f.Fm**2
    K = (f.L * f.N2 - f.M**2) / det
    H = (f.E * f.N2 - 2 * f.Fm * f.M + f.G * f.L) / (2 * det)
    disc = np.sqrt(np.maximum(H * H - K, 0.0))
    k1, k2 = H + disc, H - disc
    umbilic = np.abs(k1 - k2) < UMBILIC_TOL

    def eigvec(k):
        # Rows of (W - k I); take whichever gives the better-conditioned kernel vector.
        a = np.stack([W[..., 0, 1], k - W[..., 0, 0]], axis=-1)
        b = np.stack([k - W[..., 1, 1], W[..., 1, 0]], axis=-1)
        pick = np.linalg.norm(a, axis=-1) >= np.linalg.norm(b, axis=-1)
        d = np.where(pick[..., None], a, b)
        length2 = f.E * d[..., 0] ** 2 + 2 * f.Fm * d[..., 0] * d[..., 1] + f.G * d[..., 1] ** 2
        with np.errstate(invalid="ignore", divide="ignore"):
            d = d / np.sqrt(length2)[..., None]
        return np.where(umbilic[..., None], np.nan, d)

    return CurvatureReport(K=K, H=H, k1=k1, k2=k2, d1=eigvec(k1), d2=eigvec(k2), umbilic=umbilic)


def surface_curvatures(S, u, v, analytic: bool = True, **steps) -> CurvatureReport:
    return curvatures(fundamental_forms(jet(S, u, v, analytic=analytic, **steps)))


# --- Levi-Civita connection of dr^2 + dz^2 + r^2 dphi^2 ------------------------------


def christoffel_cyl(p: CylPoint, X, Y, dY=None) -> np.ndarray:
    """Covariant derivative nabla_X Y in cylindrical coordinates.

    ``X`` and ``Y`` are (r, phi, z) coordinate components at ``p``; ``dY``
    is the 3x3 Jacobian dY[k, i] = d_i Y^k (zero for coordinate fields).
    The only nonzero symbols are Gamma^phi_{r phi} = Gamma^phi_{phi r} = 1/r
    and Gamma^r_{phi phi} = -r.
    """
    r = float(p[0])
    if r <= 0.0:
        raise AxisPoint("cylindrical connection is singular on the z-axis")
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    out = np.zeros(3) if dY is None else np.asarray(dY, dtype=float) @ X
    out[0] += -r * X[1] * Y[1]
    out[1] += (X[0] * Y[1] + X[1] * Y[0]) / r
    return out


def christoffel_cyl_cart(p: CylPoint, X, Y, dY=None) -> np.ndarray:
    """:func:`christoffel_cyl` pushed forward to Cartesian components."""
    return cyl_vector_to_cart(p, christoffel_cyl(p, X, Y, dY))
