"""Command-line front end.

Subcommands:

    tensors    connection / curvature / Ricci tables at a point, with the
               closed-form vs finite-difference cross-check
    generate   sample a biharmonic helix, its Frenet data and bitension
               report, optionally the cylinder / helicoid meshes
    verify     classify a curve from a CSV sample file (exit 0 = biharmonic)
    geodesic   shoot a geodesic from a point and initial direction
    cone       query or sweep the cone of biharmonic directions
    scan       closed-form invariants over a grid of axis angles

Outputs are deterministic: identical inputs produce byte-identical files.
Angles are radians unless a ``--*-deg`` option is used.  A JSON config file
(``--config``) may predefine the manifold and numerics settings; explicit
flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import fields as dataclass_fields

import numpy as np

from . import analysis, factory
from . import curves as crv
from . import manifold as mf
from .errors import HeiscurvesError, InadmissibleAlpha, NonMonotone, NonUnitSpeed
from .manifold import FrameVector, ManifoldParams
from .numerics import NumericsConfig

_NUMERIC_TOL = 1e-8  # closed-form vs finite-difference agreement in `tensors`


# ---------------------------------------------------------------------------
# Config plumbing
# ---------------------------------------------------------------------------


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config file must hold a JSON object")
    return data


def _resolve_manifold(args, file_cfg: dict) -> ManifoldParams:
    man = file_cfg.get("manifold", {})
    m = args.m if args.m is not None else float(man.get("m", 0.0))
    l = args.l if args.l is not None else float(man.get("l", 1.0))
    return ManifoldParams(m, l)


def _resolve_numerics(file_cfg: dict, args=None) -> NumericsConfig:
    overrides = dict(file_cfg.get("numerics", {}))
    if args is not None:
        for item in getattr(args, "numerics", None) or []:
            key, _, raw = item.partition("=")
            if not raw:
                raise ValueError(f"--numerics expects KEY=VALUE, got {item!r}")
            overrides[key] = raw
    valid = {f.name: f.type for f in dataclass_fields(NumericsConfig)}
    unknown = set(overrides) - set(valid)
    if unknown:
        raise ValueError(f"unknown numerics settings: {sorted(unknown)}")
    defaults = NumericsConfig()
    coerced = {}
    for key, value in overrides.items():
        template = getattr(defaults, key)
        if isinstance(value, str) and not isinstance(template, str):
            value = type(template)(float(value)) if isinstance(template, float) else type(template)(value)
        coerced[key] = value
    return NumericsConfig(**coerced)


def _parse_triple(text: str, what: str) -> np.ndarray:
    try:
        parts = [float(v) for v in text.split(",")]
    except ValueError:
        raise ValueError(f"cannot parse {what} {text!r}; expected three comma-separated numbers")
    if len(parts) != 3:
        raise ValueError(f"{what} needs exactly three components, got {len(parts)}")
    return np.asarray(parts, dtype=float)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------------------
# tensors
# ---------------------------------------------------------------------------


def cmd_tensors(args, file_cfg: dict) -> int:
    params = _resolve_manifold(args, file_cfg)
    config = _resolve_numerics(file_cfg, args)
    point = _parse_triple(args.point, "--point") if args.point else np.zeros(3)

    G = mf.connection_table(params, point)
    R = mf.curvature_table(params, point)

    lines: list[str] = []
    lines.append(f"manifold: m = {params.m:g}, l = {params.l:g}")
    lines.append(f"point: ({point[0]:g}, {point[1]:g}, {point[2]:g})")
    lines.append("")
    lines.append("frame connection  nabla_{e_a} e_b  (closed form, frame components)")
    for a in range(3):
        for b in range(3):
            comps = ", ".join(_fmt(G[a, b, cmp]) for cmp in range(3))
            lines.append(f"  a={a + 1} b={b + 1}: ({comps})")

    reference = mf.h3_riemann_reference() if params.is_heisenberg else {}
    lines.append("")
    lines.append("riemann components R_abcd (a<b, c<d, nonzero)")
    seen_nonzero = []
    for a in range(3):
        for b in range(a + 1, 3):
            for c in range(3):
                for d in range(c + 1, 3):
                    val = R[a, b, c, d]
                    key = (a + 1, b + 1, c + 1, d + 1)
                    if abs(val) < 1e-15 and key not in reference:
                        continue
                    seen_nonzero.append((key, val))
    for key, val in seen_nonzero:
        tag = ""
        if key in reference:
            ref = reference[key]
            tag = f"   reference {ref:g}  " + ("MATCH" if abs(val - ref) <= 1e-12 else "MISMATCH")
        lines.append(f"  R_{key[0]}{key[1]}{key[2]}{key[3]} = {_fmt(val)}{tag}")

    ricci_ref = mf.h3_ricci_reference() if params.is_heisenberg else {}
    lines.append("")
    lines.append("ricci components rho_ab")
    for a in range(3):
        for b in range(a, 3):
            val = float(np.trace(R[a, :, b, :]))
            tag = ""
            if (a + 1, b + 1) in ricci_ref:
                ref = ricci_ref[(a + 1, b + 1)]
                tag = f"   reference {ref:g}  " + (
                    "MATCH" if abs(val - ref) <= 1e-12 else "MISMATCH"
                )
            lines.append(f"  rho_{a + 1}{b + 1} = {_fmt(val)}{tag}")

    lines.append("")
    lines.append("sectional curvatures of the frame planes")
    for (a, b) in ((1, 2), (1, 3), (2, 3)):
        ea = FrameVector(point, np.eye(3)[a - 1])
        eb = FrameVector(point, np.eye(3)[b - 1])
        lines.append(f"  K(e{a}, e{b}) = {_fmt(mf.sectional(params, point, ea, eb))}")

    G_num = mf.connection_table_numeric(params, point, h=config.fd_step)
    R_num = mf.curvature_table_numeric(
        params, point, h=config.fd_step, h_outer=config.fd_step_nested
    )
    conn_dev = float(np.abs(G - G_num).max())
    curv_dev = float(np.abs(R - R_num).max())
    ok = conn_dev <= _NUMERIC_TOL and curv_dev <= _NUMERIC_TOL
    lines.append("")
    lines.append(
        f"finite-difference cross-check: connection dev {conn_dev:.3e}, "
        f"curvature dev {curv_dev:.3e} (tol {_NUMERIC_TOL:g}) "
        + ("PASS" if ok else "FAIL")
    )

    text = "\n".join(lines)
    print(text)
    if args.json:
        payload = {
            "manifold": {"m": params.m, "l": params.l},
            "point": [float(v) for v in point],
            "connection": G.tolist(),
            "riemann": R.tolist(),
            "ricci": [[float(np.trace(R[a, :, b, :])) for b in range(3)] for a in range(3)],
            "numeric_deviation": {"connection": conn_dev, "curvature": curv_dev},
        }
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def _alpha0_from_args(args) -> float:
    given = [
        name
        for name in ("alpha0", "alpha0_deg", "sin_alpha0", "cos_alpha0")
        if getattr(args, name) is not None
    ]
    if len(given) != 1:
        raise ValueError(
            "specify the axis angle exactly once: --alpha0, --alpha0-deg, "
            "--sin-alpha0 or --cos-alpha0"
        )
    if args.alpha0 is not None:
        return float(args.alpha0)
    if args.alpha0_deg is not None:
        return math.radians(float(args.alpha0_deg))
    if args.sin_alpha0 is not None:
        return math.asin(float(args.sin_alpha0))
    return math.acos(float(args.cos_alpha0))


def _write_surface_csv(path, patch, u_vals, v_vals) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["u", "v", "x", "y", "z"])
        for u in u_vals:
            pts = factory.surface_eval(patch, np.full_like(v_vals, u), v_vals)
            for v, p in zip(v_vals, pts):
                writer.writerow([_fmt(u), _fmt(v)] + [_fmt(c) for c in p])


def cmd_generate(args, file_cfg: dict) -> int:
    config = _resolve_numerics(file_cfg, args)
    alpha0 = _alpha0_from_args(args)
    hp = factory.HelixParams(
        alpha0=alpha0, a=args.a, b=args.b, c=args.c, d=args.d, branch=args.branch
    )
    s_range = (args.s0, args.s1)
    spec = factory.biharmonic_helix(hp, s_range)
    samples = crv.sample_curve(spec, args.samples, config)
    frenet = crv.frenet_apparatus(samples, config)
    report = analysis.bitension_report(samples, config)
    result = analysis.classify_curve(samples, config)

    out = args.out
    crv.write_samples_csv(f"{out}.csv", samples, include_velocity=args.with_velocity)
    with open(f"{out}.frenet.json", "w") as fh:
        fh.write(crv.frenet_to_json(frenet))
    with open(f"{out}.report.json", "w") as fh:
        fh.write(report.to_json())
    with open(f"{out}.classification.json", "w") as fh:
        fh.write(result.to_json())
    with open(f"{out}.params.json", "w") as fh:
        fh.write(factory.dump_curve_params(spec, args.samples))
    analysis.residuals_to_csv(f"{out}.residuals.csv", report)

    written = [
        f"{out}.csv",
        f"{out}.frenet.json",
        f"{out}.report.json",
        f"{out}.classification.json",
        f"{out}.params.json",
        f"{out}.residuals.csv",
    ]
    if args.surfaces:
        nu, nv = args.surface_grid
        u_vals = np.linspace(s_range[0], s_range[1], nu)
        zs = samples.points[:, 2]
        v_cyl = np.linspace(zs.min(), zs.max(), nv)
        v_hel = np.linspace(0.0, 1.25, nv)
        _write_surface_csv(f"{out}.cylinder.csv", factory.cylinder_patch(hp), u_vals, v_cyl)
        _write_surface_csv(f"{out}.helicoid.csv", factory.helicoid_patch(hp), u_vals, v_hel)
        written += [f"{out}.cylinder.csv", f"{out}.helicoid.csv"]

    print(f"alpha0 = {alpha0:.12g}, branch = {hp.branch}, rate A = {spec.family['rate']:.12g}")
    print(
        f"max interior |tau2| = {report.max_residual:.3e}, "
        f"expansion agreement = {report.expansion_agreement:.3e}"
    )
    print(f"verdict: {result.verdict}")
    for path in written:
        print(f"wrote {path}")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args, file_cfg: dict) -> int:
    params = _resolve_manifold(args, file_cfg)
    config = _resolve_numerics(file_cfg, args)
    spec = crv.read_samples_csv(args.input, params)
    samples = crv.sample_curve(spec, None, config)
    result = analysis.classify_curve(samples, config)
    report = analysis.bitension_report(samples, config)

    print(f"curve: {args.input} ({samples.n} samples, manifold m={params.m:g} l={params.l:g})")
    print(f"verdict: {result.verdict}")
    print(f"max interior |tau2| = {report.max_residual:.6e}")
    for name, chk in sorted(result.checks.items()):
        status = "holds" if chk.passed else "fails"
        print(f"  {name:28s} residual {chk.residual:12.6e}  tol {chk.tolerance:9.3e}  {status}")
    for key in ("k_mean", "tau_mean", "B3_mean"):
        if key in result.values:
            print(f"  {key} = {result.values[key]:.9g}")
    if args.json:
        payload = json.loads(result.to_json())
        payload["max_interior_tau2"] = report.max_residual
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
    return 0 if result.is_biharmonic else 1


# ---------------------------------------------------------------------------
# geodesic
# ---------------------------------------------------------------------------


def cmd_geodesic(args, file_cfg: dict) -> int:
    params = _resolve_manifold(args, file_cfg)
    config = _resolve_numerics(file_cfg, args)
    p0 = _parse_triple(args.point, "--point")
    v0 = _parse_triple(args.direction, "--direction")
    nrm = float(np.linalg.norm(v0))
    if nrm == 0.0:
        raise ValueError("--direction must be nonzero")
    v0 = v0 / nrm
    spec = factory.geodesic_ivp(params, p0, v0, (0.0, args.length), config)
    samples = crv.sample_curve(spec, args.samples, config)
    t1 = analysis.tension1(samples, config)
    interior = samples.interior(config.stencil_order, 1)
    t1_max = float(np.linalg.norm(t1, axis=1)[interior].max())
    drift = float(np.abs(np.linalg.norm(samples.velocity_frame, axis=1) - 1.0).max())

    crv.write_samples_csv(f"{args.out}.csv", samples, include_velocity=args.with_velocity)
    print(f"geodesic from ({args.point}) direction ({args.direction}) length {args.length:g}")
    print(f"unit-speed drift = {drift:.3e}, tension residual = {t1_max:.3e}")
    print(f"wrote {args.out}.csv")
    return 0


# ---------------------------------------------------------------------------
# cone
# ---------------------------------------------------------------------------


def cmd_cone(args, file_cfg: dict) -> int:
    params = _resolve_manifold(args, file_cfg)
    if args.direction:
        v = _parse_triple(args.direction, "--direction")
        X = FrameVector(np.zeros(3), v)
        verdict = analysis.cone_membership(params, X)
        cos_a = float(v[2])
        print(f"direction ({args.direction}): cos(alpha0) = {cos_a:.9g}")
        print(f"verdict: {verdict}")
        return 0
    n = args.sweep
    lo = factory.ADMISSIBLE_BOUNDARY
    hi = math.pi - factory.ADMISSIBLE_BOUNDARY
    print(f"admissible axis angles: (0, {lo:.9f}] union [{hi:.9f}, pi)")
    print("alpha0,cos_alpha0,admissible")
    grid = np.linspace(0.0, math.pi, n + 2)[1:-1]
    for alpha0 in grid:
        cos_a = math.cos(alpha0)
        admissible = 5.0 * cos_a * cos_a - 4.0 >= -1e-12
        print(f"{alpha0:.9f},{cos_a:.9f},{int(admissible)}")
    return 0


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------


def cmd_scan(args, file_cfg: dict) -> int:
    params = _resolve_manifold(args, file_cfg)
    if not params.is_heisenberg:
        raise HeiscurvesError(
            "closed-form helix invariants exist only for (m, l) = (0, 1)"
        )
    lo = factory.ADMISSIBLE_BOUNDARY
    hi = math.pi - factory.ADMISSIBLE_BOUNDARY
    eps = 1e-6
    if args.component == "pos":
        grids = [np.linspace(eps, lo, args.count)]
    elif args.component == "neg":
        grids = [np.linspace(hi, math.pi - eps, args.count)]
    else:
        half = max(1, args.count // 2)
        grids = [np.linspace(eps, lo, half), np.linspace(hi, math.pi - eps, half)]
    branches = ["plus", "minus"] if args.branch == "both" else [args.branch]

    rows = []
    for grid in grids:
        for alpha0 in grid:
            if not args.alpha_min <= alpha0 <= args.alpha_max:
                continue
            for branch in branches:
                try:
                    hp = factory.HelixParams(alpha0=float(alpha0), branch=branch)
                except InadmissibleAlpha:
                    continue
                A = factory.solve_branch_A(hp.alpha0, branch)
                k, tau, B3 = factory.helix_invariants(hp)
                rows.append((hp.alpha0, branch, A, k, tau, B3, k * k + tau * tau + B3 * B3))

    header = "alpha0,branch,A,k,tau,B3,ksq_plus_tausq_plus_B3sq"
    lines = [header]
    for row in rows:
        lines.append(
            ",".join([_fmt(row[0]), row[1]] + [_fmt(v) for v in row[2:]])
        )
    text = "\n".join(lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out} ({len(rows)} rows)")
    else:
        print(text)
    if not rows:
        print("warning: no admissible axis angles in the requested range", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heiscurves",
        description="Tensor tables, Frenet data and biharmonic-curve verification "
        "on the Heisenberg group and its metric family.",
    )
    parser.add_argument("--config", help="JSON config file (flags override it)")
    parser.add_argument(
        "--numerics",
        action="append",
        metavar="KEY=VALUE",
        help="override a numerics setting (repeatable), e.g. --numerics stencil_order=2",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_manifold(p):
        p.add_argument("--m", type=float, default=None, help="curvature parameter m")
        p.add_argument("--l", type=float, default=None, help="twist parameter l")

    p = sub.add_parser("tensors", help="connection/curvature/Ricci tables at a point")
    add_manifold(p)
    p.add_argument("--point", help="evaluation point 'x,y,z' (default origin)")
    p.add_argument("--json", help="also write the tables to this JSON file")
    p.set_defaults(func=cmd_tensors)

    p = sub.add_parser("generate", help="sample a biharmonic helix and its reports")
    p.add_argument("--alpha0", type=float, default=None, help="axis angle in radians")
    p.add_argument("--alpha0-deg", type=float, default=None, help="axis angle in degrees")
    p.add_argument("--sin-alpha0", type=float, default=None, help="sine of the axis angle")
    p.add_argument("--cos-alpha0", type=float, default=None, help="cosine of the axis angle")
    p.add_argument("--branch", choices=["plus", "minus"], default="plus")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--b", type=float, default=0.0)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--d", type=float, default=0.0)
    p.add_argument("--s0", type=float, default=0.0)
    p.add_argument("--s1", type=float, default=10.0 * math.pi)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--with-velocity", action="store_true", help="include vx,vy,vz columns")
    p.add_argument("--surfaces", action="store_true", help="also write cylinder/helicoid meshes")
    p.add_argument(
        "--surface-grid", type=int, nargs=2, default=(121, 25), metavar=("NU", "NV")
    )
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="classify a curve from a CSV sample file")
    p.add_argument("input", help="CSV file with header s,x,y,z[,vx,vy,vz]")
    add_manifold(p)
    p.add_argument("--json", help="write the classification to this JSON file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("geodesic", help="integrate a geodesic from point + direction")
    add_manifold(p)
    p.add_argument("--point", required=True, help="start point 'x,y,z'")
    p.add_argument("--direction", required=True, help="initial frame direction 'a,b,c'")
    p.add_argument("--length", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=2001)
    p.add_argument("--with-velocity", action="store_true")
    p.add_argument("--out", required=True, help="output path prefix")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("cone", help="query or sweep the cone of biharmonic directions")
    add_manifold(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--direction", help="unit frame direction 'a,b,c'")
    group.add_argument("--sweep", type=int, help="sweep alpha0 over (0, pi) at N points")
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("scan", help="closed-form helix invariants over an angle grid")
    add_manifold(p)
    p.add_argument("--count", type=int, default=50, help="grid points (per component)")
    p.add_argument("--branch", choices=["plus", "minus", "both"], default="plus")
    p.add_argument("--component", choices=["pos", "neg", "both"], default="both")
    p.add_argument("--alpha-min", type=float, default=0.0, help="keep angles >= this")
    p.add_argument("--alpha-max", type=float, default=math.pi, help="keep angles <= this")
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_cfg = _load_config_file(args.config)
        return args.func(args, file_cfg)
    except (NonUnitSpeed, NonMonotone) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (HeiscurvesError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
