"""CSV, OBJ and JSON writers. Output is byte-for-byte deterministic."""
from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import KillingField, angle_between, fold_angle
from .curves import Polyline3
from .diffgeo import curvatures, fd_jet, fundamental_forms, unit_normal
from .surfaces import ParamSurface

REPORT_KEYS = (
    "H_mean",
    "K_mean",
    "K_stddev",
    "c_hat",
    "family",
    "grid_nu",
    "grid_nv",
    "theta_max_dev_rad",
    "theta_mean_rad",
)


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


def write_csv(polyline: Polyline3, path) -> None:
    lines = ["s,x,y,z"]
    for s, p in zip(polyline.s, polyline.points):
        lines.append(",".join([fmt(s), fmt(p[0]), fmt(p[1]), fmt(p[2])]))
    _write_text(path, "\n".join(lines) + "\n")


def read_csv(path) -> Polyline3:
    rows = Path(path).read_text(encoding="utf-8").splitlines()
    if not rows or rows[0] != "s,x,y,z":
        raise ValueError("not a polyline CSV")
    data = np.array([[float(t) for t in row.split(",")] for row in rows[1:]]).reshape(-1, 4)
    return Polyline3(data[:, 0], data[:, 1:])


@dataclass
class MeshData:
    vertices: np.ndarray
    faces: np.ndarray
    channels: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.faces = np.asarray(self.faces, dtype=np.int64).reshape(-1, 3)
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")


def grid_faces(nu: int, nv: int) -> np.ndarray:
    """Two triangles per grid cell, split along the (i, j)-(i+1, j+1) diagonal.

    Vertex (i, j) has index i * nv + j.
    """
    i, j = np.meshgrid(np.arange(nu - 1), np.arange(nv - 1), indexing="ij")
    a = (i * nv + j).reshape(-1)
    b = a + nv
    c = b + 1
    d = a + 1
    tris = np.empty((a.size, 2, 3), dtype=np.int64)
    tris[:, 0] = np.stack([a, b, c], axis=1)
    tris[:, 1] = np.stack([a, c, d], axis=1)
    return tris.reshape(-1, 3)


def build_mesh(S: ParamSurface, nu: int, nv: int, V: KillingField | None = None) -> MeshData:
    """Triangulated grid over the full domain with K, H and folded-angle channels."""
    if nu < 2 or nv < 2:
        raise ValueError("mesh needs at least a 2 x 2 grid")
    V = V or KillingField.rot_z()
    U, W = S.sample_grid(nu, nv, interior=False)
    j = S.jet_fn(U, W) if S.jet_fn is not None else fd_jet(S.evaluate, U, W)
    curv = curvatures(fundamental_forms(j))
    angle = fold_angle(angle_between(V(j.F), unit_normal(j)))
    channels = {
        "K": curv.K.reshape(-1),
        "H": curv.H.reshape(-1),
        "angle": np.atleast_1d(angle).reshape(-1),
    }
    return MeshData(j.F.reshape(-1, 3), grid_faces(nu, nv), channels)


def write_obj(mesh: MeshData, path) -> None:
    out = [f"v {fmt(x)} {fmt(y)} {fmt(z)}" for x, y, z in mesh.vertices]
    out += [f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces]
    _write_text(path, "\n".join(out) + "\n")


def write_channels_csv(mesh: MeshData, path) -> None:
    names = sorted(mesh.channels)
    lines = [",".join(["index"] + names)]
    for k in range(len(mesh.vertices)):
        lines.append(",".join([str(k)] + [fmt(mesh.channels[n][k]) for n in names]))
    _write_text(path, "\n".join(lines) + "\n")


def _clean(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


def write_report_json(report: dict, path=None) -> None:
    """Flat JSON object with alphabetically ordered keys; ``path=None`` means stdout."""
    text = json.dumps({k: _clean(v) for k, v in report.items()}, sort_keys=True, indent=2) + "\n"
    _write_text(path, text)


def _write_text(path, text: str) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
