"""Acceptance criteria, one test per criterion.

Each test prints a single PASS/FAIL line (visible without ``-s``).
"""
import hashlib
import json
import math

import numpy as np
import pytest

from constangle.cli import run
from constangle.core import BASIS_NAMES, KillingField, killing_residual
from constangle.curves import (
    Affine,
    ArcCos,
    Constant,
    Custom,
    LogSpiral,
    planar_killing_curve,
    spatial_killing_curve,
)
from constangle.diffgeo import fundamental_forms, jet, surface_curvatures
from constangle.surfaces import (
    catenoid,
    dini_band,
    dini_surface,
    halfplane,
    logspiral_cylinder,
    surface_from_function,
)
from constangle.verify import (
    DINI,
    HALFPLANE,
    LOGSPIRAL_CYLINDER,
    NOT_CONSTANT_ANGLE,
    ROTATIONAL,
    classify_surface,
    curve_angle_report,
    dini_pde_residuals,
    helix_property_check,
    sphere_property_check,
    surface_angle_report,
)

GRID = 32


def draws(n, seed):
    rng = np.random.default_rng(seed)
    return [(float(t), float(c)) for t, c in zip(rng.uniform(0.2, 1.3, n), rng.uniform(0.3, 3.0, n))]


PARAMS = draws(10, 2024)


@pytest.fixture
def verdict(capsys):
    def report(number, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
        assert ok, detail

    return report


def test_criterion_01_constant_angle(verdict):
    worst_exact, worst_fd = 0.0, 0.0
    for theta, c in PARAMS:
        cases = [
            (halfplane(theta), 0.0),
            (catenoid(c, (1.1 * c, 3.0 * c, -math.pi, math.pi)), math.pi / 2),
            (logspiral_cylinder(theta, c), theta),
            (dini_surface(theta, c), theta),
        ]
        for S, nominal in cases:
            exact = surface_angle_report(S, nu=GRID, nv=GRID).max_dev_from(nominal)
            fd = surface_angle_report(S, nu=GRID, nv=GRID, analytic=False).max_dev_from(nominal)
            worst_exact, worst_fd = max(worst_exact, exact), max(worst_fd, fd)
    ok = worst_exact < 1e-6 and worst_fd < 1e-3
    verdict(1, ok, f"max angle deviation analytic {worst_exact:.2e} (< 1e-6), FD {worst_fd:.2e} (< 1e-3)")


def test_criterion_02_dini_curvature(verdict):
    worst = 0.0
    for theta, c in PARAMS:
        S = dini_surface(theta, c)
        U, V = S.sample_grid(GRID, GRID)
        target = (c * math.tan(theta)) ** 2
        K = surface_curvatures(S, U, V).K
        worst = max(worst, float(np.max(np.abs(K + target))) / target)
    S = dini_surface(math.pi / 4, 2.0)
    K_ref = float(np.mean(surface_curvatures(S, *S.sample_grid(GRID, GRID)).K))
    ok = worst < 1e-4 and abs(K_ref + 4.0) < 1e-10
    verdict(2, ok, f"max |K + c^2 tan^2| / c^2 tan^2 = {worst:.2e} (< 1e-4); theta=pi/4, c=2 gives K={K_ref:.12f}")


def test_criterion_03_catenoid(verdict):
    S = catenoid()
    U, V = S.sample_grid(GRID, GRID)
    H = float(np.max(np.abs(surface_curvatures(S, U, V).H)))
    dev = surface_angle_report(S, nu=GRID, nv=GRID).max_dev_from(math.pi / 2)
    verdict(3, H < 1e-6 and dev < 1e-12, f"catenoid max |H| = {H:.2e} (< 1e-6), angle deviation from pi/2 = {dev:.2e}")


def test_criterion_04_flat_cases(verdict):
    worst_K, worst_h = 0.0, 0.0
    for theta, c in PARAMS:
        for S in (halfplane(theta), logspiral_cylinder(theta, c)):
            U, V = S.sample_grid(GRID, GRID)
            f = fundamental_forms(jet(S, U, V))
            worst_K = max(worst_K, float(np.max(np.abs(surface_curvatures(S, U, V).K))))
            if S.family == "halfplane":
                worst_h = max(worst_h, float(np.max(np.abs(f.second_form_chart()))))
    ok = worst_K < 1e-8 and worst_h < 1e-8
    verdict(4, ok, f"max |K| = {worst_K:.2e} (< 1e-8), halfplane max |h| = {worst_h:.2e} (< 1e-8)")


def test_criterion_05_pde_systems(verdict):
    worst = 0.0
    for theta, c in draws(5, 5):
        lo, hi = dini_band(c)
        S = dini_surface(theta, c)
        u, v = np.meshgrid(np.linspace(lo, hi, 10), np.linspace(*S.domain[2:], 10), indexing="ij")
        worst = max(worst, float(np.max(np.abs(dini_pde_residuals(theta, c, u, v)))))
    verdict(5, worst < 1e-9, f"max of nine PDE residuals over 5 draws x 10x10 grid = {worst:.2e} (< 1e-9)")


def test_criterion_06_parametric_curves(verdict):
    worst_r, worst_p, worst_s = 0.0, 0.0, 0.0
    for theta, c in PARAMS:
        S = dini_surface(theta, c)
        ct = math.cos(theta)
        for t in (0.2, 0.5, 0.8):
            u0 = S.domain[0] + t * (S.domain[1] - S.domain[0])
            h = helix_property_check(S, u0)
            worst_r = max(worst_r, abs(h.radius / (ct * math.sin(c * u0) / c) - 1))
            worst_p = max(worst_p, abs(abs(h.pitch) / (2 * math.pi * ct / (c * math.tan(theta))) - 1))
        for v0 in (S.domain[2], 0.5 * (S.domain[2] + S.domain[3])):
            s = sphere_property_check(S, v0)
            worst_s = max(worst_s, abs(s.radius - ct / c), s.max_dev)
    ref = sphere_property_check(dini_surface(math.pi / 3, 1.0), 0.3)
    ok = worst_r < 1e-8 and worst_p < 1e-8 and worst_s < 1e-10 and abs(ref.radius - 0.5) < 1e-10
    verdict(
        6,
        ok,
        f"helix radius rel {worst_r:.1e}, pitch rel {worst_p:.1e} (< 1e-8); "
        f"sphere radius {worst_s:.1e} (< 1e-10); theta=pi/3, c=1 radius {ref.radius:.12f}",
    )


def test_criterion_07_curves(verdict):
    spiral = planar_killing_curve(LogSpiral(math.pi / 4, 0.0), (1.0, 2.0), 10)
    r_e = float(np.linalg.norm(spiral.points[0]))
    ok_spiral = abs(r_e - math.e) < 1e-12

    theta = math.pi / 6
    cases = [
        (Constant(math.pi / 4), 0.0, (1.0, 5.0)),
        (Affine(0.5, 0.0), 1.0, (0.0, 2 * math.pi)),
        (ArcCos(), 0.5, (-0.9, 0.9)),
        (Custom(lambda s: np.sin(3 * s)), 1.0, (0.0, 4.0)),
    ]
    min_ratio = math.inf
    for omega, r0, rng in cases:
        errs = [curve_angle_report(spatial_killing_curve(omega, theta, r0, rng, n)).max_dev_from(theta) for n in (201, 401, 801)]
        min_ratio = min(min_ratio, errs[0] / errs[1], errs[1] / errs[2])

    sphere_defect = 0.0
    for th, m in ((math.pi / 6, 0.5), (1.0, 1.5), (0.3, -2.0)):
        span = math.pi / abs(m)
        c = spatial_killing_curve(Affine(m, 0.0), th, 0.0, (0.01 * span, 0.99 * span), 10_000)
        sphere_defect = max(sphere_defect, float(np.max(np.abs(np.linalg.norm(c.points, axis=1) - math.sin(th) / abs(m)))))

    cone_defect = 0.0
    for th, w0 in ((math.pi / 4, math.pi / 4), (0.5, 1.0), (1.2, 0.3)):
        x, y, z = spatial_killing_curve(Constant(w0), th, 0.0, (0.1, 5.0), 2001).points.T
        cone_defect = max(cone_defect, float(np.max(np.abs(x**2 + y**2 - z**2 / math.tan(w0) ** 2))))

    ok = ok_spiral and min_ratio >= 6 and sphere_defect < 1e-6 and cone_defect < 1e-6
    verdict(
        7,
        ok,
        f"spiral r(1)={r_e:.12f}; min refinement ratio {min_ratio:.1f} (>= 6); "
        f"sphere defect {sphere_defect:.1e}, cone defect {cone_defect:.1e} (< 1e-6)",
    )


def test_criterion_08_killing_algebra(verdict):
    rng = np.random.default_rng(8)
    worst = 0.0
    for name in BASIS_NAMES:
        V = KillingField.basis(name)
        for _ in range(100):
            p, Y, Z = rng.uniform(-3, 3, size=(3, 3))
            worst = max(worst, abs(killing_residual(V, p, Y, Z, h=1e-4)))

    def stretch(p):
        return np.array([p[0], 0.0, 0.0])

    e1 = np.array([1.0, 0.0, 0.0])
    bad = abs(killing_residual(stretch, rng.normal(size=3), e1, e1))
    verdict(8, worst < 1e-8 and bad >= 1, f"basis max residual {worst:.1e} (< 1e-8); (x,0,0) residual {bad:.3f} (>= 1)")


def off_axis_sphere(u, v):
    u, v = np.broadcast_arrays(u, v)
    return np.stack([2 + np.cos(u) * np.cos(v), np.cos(u) * np.sin(v), np.sin(u)], axis=-1)


def test_criterion_09_classifier(verdict):
    rng = np.random.default_rng(99)
    failures = []
    worst_t, worst_c = 0.0, 0.0
    for k, (theta, c) in enumerate(draws(20, 9)):
        kind = (HALFPLANE, ROTATIONAL, LOGSPIRAL_CYLINDER, DINI)[k % 4]
        if kind == HALFPLANE:
            S, nominal = halfplane(float(rng.uniform(-math.pi, math.pi))), 0.0
        elif kind == ROTATIONAL:
            S, nominal = catenoid(c), math.pi / 2
        elif kind == LOGSPIRAL_CYLINDER:
            S, nominal = logspiral_cylinder(theta, c), theta
        else:
            S, nominal = dini_surface(theta, c), theta
        lab = classify_surface(S)
        if lab.kind != kind:
            failures.append((kind, lab.kind))
            continue
        worst_t = max(worst_t, abs(lab.theta_hat - nominal))
        if kind in (LOGSPIRAL_CYLINDER, DINI):
            worst_c = max(worst_c, abs(lab.c_hat - c))
    sphere = classify_surface(surface_from_function(off_axis_sphere, (-1.0, 1.0, 0.0, 2 * math.pi))).kind
    ok = not failures and worst_t < 1e-4 and worst_c < 1e-3 and sphere == NOT_CONSTANT_ANGLE
    verdict(
        9,
        ok,
        f"20 draws, mislabels {failures}; max |theta_hat - theta| {worst_t:.1e} (< 1e-4), "
        f"max |c_hat - c| {worst_c:.1e} (< 1e-3); off-axis sphere -> {sphere}",
    )


def test_criterion_10_determinism(tmp_path, verdict):
    commands = {
        "obj": ["surface", "--family", "dini", "--theta", "pi/3", "--c", "1", "--nu", "24", "--nv", "24"],
        "csv": ["curve", "--kind", "spatial", "--omega", "arccos", "--theta", "0.7", "--r0", "0.5", "--range", "-0.9", "0.9"],
        "json": ["report", "--family", "logspiral", "--theta", "0.9", "--c", "1.7", "--fd"],
    }
    distinct = {}
    for ext, argv in commands.items():
        digests = set()
        for k in range(5):
            out = tmp_path / f"run{k}.{ext}"
            assert run([*argv, "--out", str(out)]) == 0
            data = out.read_bytes()
            if ext == "obj":
                data += (tmp_path / f"run{k}.{ext}.channels.csv").read_bytes()
            if ext == "json":
                json.loads(data)
            digests.add(hashlib.sha256(data).hexdigest())
        distinct[ext] = len(digests)
    verdict(10, all(n == 1 for n in distinct.values()), f"distinct hashes over 5 runs: {distinct}")
