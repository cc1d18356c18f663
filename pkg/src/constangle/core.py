"""Points, cylindrical coordinates, Killing fields of E^3 and angles.

Vectors are plain ``numpy`` arrays whose last axis has length 3, so every
function here works on a single point or on a whole sample grid at once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ZeroVector

Vec3 = np.ndarray

ZERO_NORM = 1e-300
DEFAULT_KILLING_STEP = 1e-4


def vec3(x, y, z) -> Vec3:
    return np.array([x, y, z], dtype=float)


class CylPoint(NamedTuple):
    r: float
    phi: float
    z: float


def cyl_to_cart(p: CylPoint) -> Vec3:
    r, phi, z = (np.asarray(t, dtype=float) for t in p)
    return np.stack(np.broadcast_arrays(r * np.cos(phi), r * np.sin(phi), z), axis=-1)


def cart_to_cyl(p: Vec3) -> CylPoint:
    p = np.asarray(p, dtype=float)
    return CylPoint(np.hypot(p[..., 0], p[..., 1]), np.arctan2(p[..., 1], p[..., 0]), p[..., 2])


def cyl_vector_to_cart(p: CylPoint, comps) -> Vec3:
    """Push a vector given in the coordinate basis (d_r, d_phi, d_z) to Cartesian."""
    r, phi, _ = (np.asarray(t, dtype=float) for t in p)
    comps = np.asarray(comps, dtype=float)
    cr, cp, cz = comps[..., 0], comps[..., 1], comps[..., 2]
    c, s = np.cos(phi), np.sin(phi)
    return np.stack(np.broadcast_arrays(cr * c - cp * r * s, cr * s + cp * r * c, cz), axis=-1)


def cart_vector_to_cyl(p: CylPoint, w) -> np.ndarray:
    """Inverse of :func:`cyl_vector_to_cart` (requires r > 0)."""
    r, phi, _ = (np.asarray(t, dtype=float) for t in p)
    w = np.asarray(w, dtype=float)
    c, s = np.cos(phi), np.sin(phi)
    wr = w[..., 0] * c + w[..., 1] * s
    wp = (-w[..., 0] * s + w[..., 1] * c) / r
    return np.stack(np.broadcast_arrays(wr, wp, w[..., 2]), axis=-1)


# Order matches the coefficient vector of KillingField.
BASIS_NAMES = ("dx", "dy", "dz", "rotZ", "rotX", "rotY")


def _basis_fields(p: np.ndarray) -> np.ndarray:
    """Stack of the six basis fields at p, shape (..., 6, 3)."""
    x, y, z = p[..., 0], p[..., 1], p[..., 2]
    one, zero = np.ones_like(x), np.zeros_like(x)
    return np.stack(
        [
            np.stack([one, zero, zero], axis=-1),
            np.stack([zero, one, zero], axis=-1),
            np.stack([zero, zero, one], axis=-1),
            np.stack([-y, x, zero], axis=-1),  # -y d_x + x d_y
            np.stack([zero, -z, y], axis=-1),  # -z d_y + y d_z
            np.stack([z, zero, -x], axis=-1),  # z d_x - x d_z
        ],
        axis=-2,
    )


@dataclass(frozen=True)
class KillingField:
    """Element of the Killing algebra of E^3 as a coefficient 6-vector.

    The basis is (d_x, d_y, d_z, -y d_x + x d_y, -z d_y + y d_z, z d_x - x d_z).
    Instances are callable: ``V(p)`` evaluates the field at ``p``.
    """

    coeffs: tuple[float, float, float, float, float, float]

    def __post_init__(self):
        coeffs = tuple(float(a) for a in self.coeffs)
        if len(coeffs) != 6:
            raise ValueError("a Killing field needs exactly 6 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def basis(cls, name: str | int) -> "KillingField":
        idx = BASIS_NAMES.index(name) if isinstance(name, str) else int(name)
        coeffs = [0.0] * 6
        coeffs[idx] = 1.0
        return cls(tuple(coeffs))

    @classmethod
    def rot_z(cls) -> "KillingField":
        return cls.basis("rotZ")

    def __call__(self, p) -> Vec3:
        return killing_eval(self, p)

    def scaled(self, lam: float) -> "KillingField":
        return KillingField(tuple(lam * a for a in self.coeffs))


def killing_eval(V: KillingField, p) -> Vec3:
    p = np.asarray(p, dtype=float)
    return np.einsum("i,...ij->...j", np.asarray(V.coeffs), _basis_fields(p))


def killing_residual(
    W: Callable[[np.ndarray], np.ndarray],
    p,
    Y,
    Z,
    h: float = DEFAULT_KILLING_STEP,
) -> float:
    """<D_Y W, Z> + <D_Z W, Y> by central differences of step ``h``.

    Vanishes (up to O(h^2) and rounding) exactly when W is Killing.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    p, Y, Z = (np.asarray(t, dtype=float) for t in (p, Y, Z))
    dY = (np.asarray(W(p + h * Y)) - np.asarray(W(p - h * Y))) / (2 * h)
    dZ = (np.asarray(W(p + h * Z)) - np.asarray(W(p - h * Z))) / (2 * h)
    return float(dY @ Z + dZ @ Y)


def angle_between(a, b) -> np.ndarray | float:
    """Unoriented angle in [0, pi] between a and b (vectorized over leading axes).

    Uses atan2(|a x b|, a . b), which stays accurate near 0 and pi where the
    clamped-arccos form loses half the significant digits.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = np.linalg.norm(a, axis=-1)
    nb = np.linalg.norm(b, axis=-1)
    if np.any(na < ZERO_NORM) or np.any(nb < ZERO_NORM):
        raise ZeroVector("angle with a zero vector is undefined")
    ua = a / na[..., None]
    ub = b / nb[..., None]
    out = np.arctan2(np.linalg.norm(np.cross(ua, ub), axis=-1), np.sum(ua * ub, axis=-1))
    return float(out) if out.ndim == 0 else out


def fold_angle(alpha):
    """Identify alpha with pi - alpha; result lies in [0, pi/2]."""
    return np.minimum(alpha, np.pi - alpha)
