"""Command-line front end.

Subcommands: ``curve`` (CSV polyline), ``surface`` (OBJ mesh plus a
``.channels.csv`` sibling), ``verify`` (angle report), ``classify`` and
``report`` (JSON summary). Angles are radians; ``pi``, ``pi/2``, ``pi/3``,
``pi/4`` and ``pi/6`` are accepted as exact tokens.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 domain or math error.
"""
from __future__ import annotations

import argparse
import math
import sys

from . import curves, surfaces
from .core import BASIS_NAMES, KillingField
from .errors import GeometryError
from .export import (
    REPORT_KEYS,
    _write_text,
    build_mesh,
    write_channels_csv,
    write_csv,
    write_obj,
    write_report_json,
)
from .verify import classify_surface, surface_angle_report

EXIT_OK, EXIT_IO, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3

_PI_TOKENS = {
    "pi": math.pi,
    "pi/2": math.pi / 2,
    "pi/3": math.pi / 3,
    "pi/4": math.pi / 4,
    "pi/6": math.pi / 6,
}


def parse_number(text: str) -> float:
    t = text.strip().lower()
    sign = 1.0
    if t.startswith("-") and t[1:] in _PI_TOKENS:
        sign, t = -1.0, t[1:]
    if t in _PI_TOKENS:
        return sign * _PI_TOKENS[t]
    try:
        value = float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_field(text: str) -> KillingField:
    if text in BASIS_NAMES:
        return KillingField.basis(text)
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError(f"field must be one of {', '.join(BASIS_NAMES)} or six comma-separated coefficients")
    return KillingField(tuple(parse_number(p) for p in parts))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


SURFACE_FAMILIES = ("halfplane", "rotational", "catenoid", "logspiral", "dini")
PROFILES = {
    "plane": (lambda u: 0.0 * u, lambda u: 0.0 * u, lambda u: 0.0 * u),
    "cone": (lambda u: 1.0 * u, lambda u: 1.0 + 0.0 * u, lambda u: 0.0 * u),
}


def _add_surface_args(p):
    p.add_argument("--family", required=True, choices=SURFACE_FAMILIES)
    p.add_argument("--theta", type=parse_number)
    p.add_argument("--c", type=parse_number, default=1.0)
    p.add_argument("--phi0", type=parse_number, default=0.0)
    p.add_argument("--profile", choices=("catenoid", "plane", "cone"), default="catenoid")
    p.add_argument("--scale", type=parse_number, default=1.0, help="catenoid waist radius")
    p.add_argument("--u-range", nargs=2, type=parse_number, metavar=("U0", "U1"))
    p.add_argument("--v-range", nargs=2, type=parse_number, metavar=("V0", "V1"))
    p.add_argument("--nu", type=int, default=32)
    p.add_argument("--nv", type=int, default=32)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="constangle", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("curve", help="sample a constant-angle curve to CSV")
    p.add_argument("--kind", required=True, choices=("circle", "line", "logspiral", "spatial", "vs-circle"))
    p.add_argument("--theta", type=parse_number)
    p.add_argument("--r0", type=parse_number, default=1.0)
    p.add_argument("--phi0", type=parse_number, default=0.0)
    p.add_argument("--direction", type=parse_number, default=0.0)
    p.add_argument("--omega", choices=("constant", "affine", "arccos"), default="constant")
    p.add_argument("--omega0", type=parse_number, default=0.0)
    p.add_argument("--m", type=parse_number, default=1.0)
    p.add_argument("--b", type=parse_number, default=0.0, help="intercept of the affine omega")
    p.add_argument("--sigma", choices=("linear", "square"), default="linear")
    p.add_argument("--range", nargs=2, type=parse_number, required=True, metavar=("A", "B"))
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out", default="-")

    p = sub.add_parser("surface", help="mesh a constant-angle surface to OBJ")
    _add_surface_args(p)
    p.add_argument("--out", required=True)

    p = sub.add_parser("verify", help="angle report against a Killing field")
    _add_surface_args(p)
    p.add_argument("--field", type=parse_field, default=KillingField.rot_z())
    p.add_argument("--fd", action="store_true", help="finite-difference jets instead of closed forms")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default="-")

    for name, text in (("classify", "identify the surface family"), ("report", "JSON summary of angle and curvature")):
        p = sub.add_parser(name, help=text)
        _add_surface_args(p)
        p.add_argument("--fd", action="store_true")
        p.add_argument("--json", action="store_true")
        p.add_argument("--out", default="-")
    return parser


def _check_theta(args, parser):
    if args.theta is not None and not 0.0 <= args.theta <= math.pi / 2:
        parser.error(f"--theta must lie in [0, pi/2], got {args.theta}")


def _need_theta(args):
    if args.theta is None:
        raise GeometryError(f"--theta is required for {args.family if hasattr(args, 'family') else args.kind}")
    return args.theta


def make_surface(args) -> surfaces.ParamSurface:
    fam = args.family
    dom = None
    if args.u_range or args.v_range:
        defaults = {
            "halfplane": (0.5, 2.0, -1.0, 1.0),
            "rotational": (0.5, 2.0, 0.0, 2 * math.pi),
            "catenoid": (1.1 * args.scale, 3.0 * args.scale, 0.0, 2 * math.pi),
            "logspiral": (0.5, 3.0, -1.0, 1.0),
        }
        if fam == "dini":
            theta = _need_theta(args)
            lo, hi = surfaces.dini_band(args.c) if args.c > 0 else (0.0, 1.0)
            base = (lo, hi, 0.0, 2 * math.pi * math.cos(theta) / (args.c * math.tan(theta)))
        elif fam == "rotational" and args.profile == "catenoid":
            base = defaults["catenoid"]
        else:
            base = defaults[fam]
        u = tuple(args.u_range) if args.u_range else base[:2]
        v = tuple(args.v_range) if args.v_range else base[2:]
        dom = u + v
    if fam == "halfplane":
        return surfaces.halfplane(args.phi0, dom or (0.5, 2.0, -1.0, 1.0))
    if fam == "catenoid" or (fam == "rotational" and args.profile == "catenoid"):
        return surfaces.catenoid(args.scale, dom)
    if fam == "rotational":
        z, dz, d2z = PROFILES[args.profile]
        return surfaces.rotational_surface(
            z, dom or (0.5, 2.0, 0.0, 2 * math.pi), dz, d2z, params={"profile": args.profile}
        )
    if fam == "logspiral":
        return surfaces.logspiral_cylinder(_need_theta(args), args.c, dom or (0.5, 3.0, -1.0, 1.0))
    return surfaces.dini_surface(_need_theta(args), args.c, dom)


def _echo(args) -> dict:
    keys = ("family", "theta", "c", "phi0", "profile", "scale", "u_range", "v_range", "nu", "nv", "fd")
    out = {}
    for k in keys:
        val = getattr(args, k, None)
        if val is None:
            continue
        out["arg_" + k] = list(val) if isinstance(val, (list, tuple)) else val
    return out


def cmd_curve(args) -> int:
    if args.kind == "circle":
        poly = curves.planar_killing_curve(curves.Circle(args.r0), args.range, args.samples)
    elif args.kind == "line":
        poly = curves.planar_killing_curve(curves.Line(args.direction), args.range, args.samples)
    elif args.kind == "logspiral":
        poly = curves.planar_killing_curve(curves.LogSpiral(_need_theta(args), args.phi0), args.range, args.samples)
    elif args.kind == "spatial":
        omega = {
            "constant": lambda: curves.Constant(args.omega0),
            "affine": lambda: curves.Affine(args.m, args.b),
            "arccos": curves.ArcCos,
        }[args.omega]()
        poly = curves.spatial_killing_curve(omega, _need_theta(args), args.r0, args.range, args.samples)
    else:
        sigma = (lambda s: s) if args.sigma == "linear" else (lambda s: s * s)
        poly = curves.curve_vs_circle(sigma, _need_theta(args), args.range, args.samples)
    write_csv(poly, args.out)
    return EXIT_OK


def cmd_surface(args) -> int:
    S = make_surface(args)
    mesh = build_mesh(S, args.nu, args.nv)
    write_obj(mesh, args.out)
    write_channels_csv(mesh, f"{args.out}.channels.csv")
    return EXIT_OK


def cmd_verify(args) -> int:
    S = make_surface(args)
    rep = surface_angle_report(S, args.field, args.nu, args.nv, analytic=not args.fd)
    data = {
        "samples": rep.samples,
        "theta_mean": rep.theta_mean,
        "theta_max_dev": rep.theta_max_dev,
        "fold_applied": rep.fold_applied,
        "field": [float(a) for a in args.field.coeffs],
        **_echo(args),
    }
    if args.json:
        write_report_json(data, args.out)
    else:
        _line(args.out, f"theta_mean={rep.theta_mean:.12g} theta_max_dev={rep.theta_max_dev:.3g} samples={rep.samples}")
    return EXIT_OK


def _summary(args) -> dict:
    S = make_surface(args)
    label = classify_surface(S, nu=args.nu, nv=args.nv, analytic=not args.fd)
    rep = label.angle_report
    data = dict.fromkeys(REPORT_KEYS)
    data.update(
        H_mean=label.H_mean,
        K_mean=label.K_mean,
        K_stddev=label.K_stddev,
        c_hat=label.c_hat,
        family=label.kind,
        grid_nu=args.nu,
        grid_nv=args.nv,
        theta_max_dev_rad=rep.theta_max_dev,
        theta_mean_rad=rep.theta_mean,
    )
    data["theta_hat"] = label.theta_hat
    data.update(_echo(args))
    return data


def cmd_classify(args) -> int:
    data = _summary(args)
    if args.json:
        write_report_json({k: data[k] for k in ("family", "theta_hat", "c_hat")}, args.out)
    else:
        parts = [data["family"]]
        if data["theta_hat"] is not None:
            parts.append(f"theta_hat={data['theta_hat']:.12g}")
        if data["c_hat"] is not None:
            parts.append(f"c_hat={data['c_hat']:.12g}")
        _line(args.out, " ".join(parts))
    return EXIT_OK


def cmd_report(args) -> int:
    write_report_json(_summary(args), args.out)
    return EXIT_OK


def _line(path, text):
    _write_text(path, text + "\n")


COMMANDS = {
    "curve": cmd_curve,
    "surface": cmd_surface,
    "verify": cmd_verify,
    "classify": cmd_classify,
    "report": cmd_report,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        _check_theta(args, parser)
        for flag in ("nu", "nv", "samples"):
            if getattr(args, flag, 3) < 2:
                parser.error(f"--{flag} must be at least 2")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except GeometryError as exc:
        sys.stderr.write(f"constangle: error: {exc}\n")
        return EXIT_DOMAIN
    except OSError as exc:
        sys.stderr.write(f"constangle: error: {exc}\n")
        return EXIT_IO


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
