"""Constructors for the concrete curve families and surfaces.

The centerpiece is the closed-form family of unit-speed helices on the
Heisenberg group whose tangent makes a constant angle alpha0 with the
vertical direction e3,

    x(s) =  (sin(alpha0) / A) sin(A s + a) + b,
    y(s) = -(sin(alpha0) / A) cos(A s + a) + c,
    z(s) =  (cos(alpha0) + sin(alpha0)^2 / (2A)) s
            - (b / 2A) sin(alpha0) cos(A s + a)
            - (c / 2A) sin(alpha0) sin(A s + a) + d.

For the rotation rate A solving

    A^2 - cos(alpha0) A + 1 - cos(alpha0)^2 = 0,

which has real roots exactly when 5 cos(alpha0)^2 - 4 >= 0, the curve has
vanishing bitension field: these are all the non-geodesic biharmonic curves
of the group.  The same parametric form with an arbitrary rate is exposed as
``helix_family_curve`` and serves as the negative control (off-root rates
give curves with constant invariants that fail the characterization system).

Also provided: geodesics by ODE shooting, one-parameter subgroups (straight
lines through the identity), the non-biharmonic family with vanishing third
binormal component, and the cylinder / helicoid pair whose intersection
contains the biharmonic helix.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from . import manifold as mf
from .curves import CurveSamples, CurveSpec, sample_curve
from .errors import (
    DomainExit,
    InadmissibleAlpha,
    IntegrationFailure,
    NonMonotoneAlpha,
    NonUnitVector,
    UnsupportedManifold,
)
from .manifold import HEISENBERG, ManifoldParams
from .numerics import DEFAULT_CONFIG, NumericsConfig, cumulative_simpson

__all__ = [
    "HelixParams",
    "ADMISSIBLE_BOUNDARY",
    "solve_branch_A",
    "helix_family_curve",
    "biharmonic_helix",
    "helix_invariants",
    "geodesic_ivp",
    "one_param_subgroup",
    "b3zero_curve",
    "tangent_driven_curve",
    "SurfacePatch",
    "cylinder_patch",
    "helicoid_patch",
    "surface_eval",
    "membership_residual",
    "dump_curve_params",
    "load_curve_params",
]

# Half-angle of the admissible cone: directions with |cos(alpha0)| >= 2/sqrt(5).
ADMISSIBLE_BOUNDARY = math.acos(2.0 / math.sqrt(5.0))

_DISC_SLACK = 1e-12  # tolerance for the double root at the cone boundary


@dataclass(frozen=True)
class HelixParams:
    """Parameters of the closed-form helix family.

    alpha0  axis angle in (0, pi) with 5 cos(alpha0)^2 - 4 >= 0
    a, b, c, d  phase and translation constants
    branch  which root of the rate quadratic ("plus" or "minus")
    """

    alpha0: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    branch: str = "plus"

    def __post_init__(self):
        if self.branch not in ("plus", "minus"):
            raise ValueError(f"branch must be 'plus' or 'minus', got {self.branch!r}")
        if not 0.0 < self.alpha0 < math.pi:
            raise InadmissibleAlpha(
                f"alpha0 = {self.alpha0} outside (0, pi): sin(alpha0) must not vanish"
            )
        c0 = math.cos(self.alpha0)
        if 5.0 * c0 * c0 - 4.0 < -_DISC_SLACK:
            raise InadmissibleAlpha(
                f"alpha0 = {self.alpha0} violates the admissibility condition "
                f"cos(alpha0)^2 >= 4/5 (got cos^2 = {c0 * c0:.6f})"
            )


def solve_branch_A(alpha0: float, branch: str = "plus") -> float:
    """Root of A^2 - cos(alpha0) A + 1 - cos(alpha0)^2 = 0 on the requested
    branch.  The residual of the returned root is below 1e-12 by
    construction; InadmissibleAlpha is raised for a negative discriminant."""
    c0 = math.cos(alpha0)
    s0 = math.sin(alpha0)
    if s0 == 0.0:
        raise InadmissibleAlpha("sin(alpha0) = 0 degenerates the family")
    disc = 5.0 * c0 * c0 - 4.0
    if disc < -_DISC_SLACK:
        raise InadmissibleAlpha(
            f"negative discriminant 5 cos(alpha0)^2 - 4 = {disc:.6e}; need "
            "cos(alpha0)^2 >= 4/5"
        )
    root = math.sqrt(max(disc, 0.0))
    A = 0.5 * (c0 + root) if branch == "plus" else 0.5 * (c0 - root)
    residual = A * A - c0 * A + 1.0 - c0 * c0
    if abs(residual) > 1e-12:
        raise InadmissibleAlpha(f"root verification failed: residual {residual:.3e}")
    if A == c0:
        # would force k = 0; cannot happen for sin(alpha0) != 0 but guard anyway
        raise InadmissibleAlpha("rate equals cos(alpha0): the curve is a geodesic")
    return A


def helix_family_curve(
    alpha0: float,
    rate: float,
    a: float = 0.0,
    b: float = 0.0,
    c: float = 0.0,
    d: float = 0.0,
    s_range: tuple[float, float] = (0.0, 10.0 * math.pi),
) -> CurveSpec:
    """The constant-axis-angle family with an arbitrary rotation rate.

    Unit speed for every rate; biharmonic only when the rate solves the
    branch quadratic.  Exact position and velocity callables.
    """
    if rate == 0.0:
        raise ValueError("rate must be nonzero")
    S, C = math.sin(alpha0), math.cos(alpha0)
    A = rate
    zslope = C + S * S / (2.0 * A)

    def point_fn(s):
        s = np.asarray(s, dtype=float)
        beta = A * s + a
        x = (S / A) * np.sin(beta) + b
        y = -(S / A) * np.cos(beta) + c
        z = (
            zslope * s
            - (b * S / (2.0 * A)) * np.cos(beta)
            - (c * S / (2.0 * A)) * np.sin(beta)
            + d
        )
        return np.stack([x, y, z], axis=-1)

    def velocity_fn(s):
        s = np.asarray(s, dtype=float)
        beta = A * s + a
        dx = S * np.cos(beta)
        dy = S * np.sin(beta)
        dz = zslope + 0.5 * S * (b * np.sin(beta) - c * np.cos(beta))
        return np.stack([dx, dy, dz], axis=-1)

    def frame_velocity_fn(s):
        s = np.asarray(s, dtype=float)
        beta = A * s + a
        return np.stack(
            [S * np.cos(beta), S * np.sin(beta), np.full_like(beta, C)], axis=-1
        )

    return CurveSpec(
        kind="closed_form",
        manifold=HEISENBERG,
        s_range=s_range,
        point_fn=point_fn,
        velocity_fn=velocity_fn,
        frame_velocity_fn=frame_velocity_fn,
        family={
            "family": "helix_family",
            "alpha0": alpha0,
            "rate": rate,
            "a": a,
            "b": b,
            "c": c,
            "d": d,
        },
    )


def biharmonic_helix(
    hp: HelixParams, s_range: tuple[float, float] = (0.0, 10.0 * math.pi)
) -> CurveSpec:
    """The non-geodesic biharmonic helix with the given parameters."""
    A = solve_branch_A(hp.alpha0, hp.branch)
    spec = helix_family_curve(hp.alpha0, A, hp.a, hp.b, hp.c, hp.d, s_range)
    family = {
        "family": "biharmonic_helix",
        "alpha0": hp.alpha0,
        "a": hp.a,
        "b": hp.b,
        "c": hp.c,
        "d": hp.d,
        "branch": hp.branch,
        "rate": A,
    }
    return replace(spec, family=family)


def helix_invariants(hp: HelixParams) -> tuple[float, float, float]:
    """Closed-form (k, tau, B3) of the helix, in the measured orientation.

    With w = cos(alpha0) - A the raw curvature is sin(alpha0) w; the package
    normalizes k >= 0, which flips N (and hence B3) when w < 0.  tau is
    orientation-invariant.  The returned triple satisfies
    k^2 + tau^2 + B3^2 = 1/4 identically.
    """
    A = solve_branch_A(hp.alpha0, hp.branch)
    S, C = math.sin(hp.alpha0), math.cos(hp.alpha0)
    k_signed = S * (C - A)
    tau = -(C * A + 0.5 - C * C)
    sign = 1.0 if k_signed >= 0.0 else -1.0
    return abs(k_signed), tau, -sign * S


# ---------------------------------------------------------------------------
# Geodesics, subgroups and the vanishing-B3 family
# ---------------------------------------------------------------------------


def _require_unit(v: np.ndarray, what: str, tol: float = 1e-9) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise NonUnitVector(f"{what} must have 3 components")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > tol:
        raise NonUnitVector(f"{what} must be unit, |v| = {nrm:.12f}")
    return v


def _rk4_states(rhs, y0, s_grid, step: float, params: ManifoldParams):
    """Fixed-step classical Runge-Kutta, for bit-reproducible geodesics."""
    ds = float(s_grid[1] - s_grid[0])
    n_sub = max(1, int(math.ceil(ds / step)))
    h = ds / n_sub
    out = np.empty((len(s_grid), y0.size))
    out[0] = y0
    y = np.array(y0, dtype=float)
    s = float(s_grid[0])
    for i in range(1, len(s_grid)):
        for _ in range(n_sub):
            k1 = rhs(s, y)
            k2 = rhs(s + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(s + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(s + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            s += h
        if params.m < 0.0 and 1.0 + params.m * (y[0] ** 2 + y[1] ** 2) <= 1e-9:
            raise DomainExit(f"geodesic left the chart at s = {s:.6f}")
        out[i] = y
    return out[:, :3], out[:, 3:]


def geodesic_ivp(
    params: ManifoldParams,
    p0,
    v0_frame,
    s_range: tuple[float, float],
    config: NumericsConfig = DEFAULT_CONFIG,
) -> CurveSpec:
    """Geodesic through p0 with unit initial velocity (frame components).

    The state is (position, frame components of the tangent); the tangent
    obeys T_a' = -Gamma_ij^a T_i T_j, which preserves |T| exactly at the
    continuous level because the frame connection coefficients are
    antisymmetric in their last two slots.
    """
    p0 = mf.as_point(p0)
    v0 = _require_unit(v0_frame, "initial velocity")
    mf.conformal_factor(params, p0)
    m, l = params.m, params.l

    def rhs(_s, y):
        # frame components of the tangent: T_a' = -Gamma_ij^a T_i T_j,
        # written out from the connection table; T3 is a first integral
        x, yy, _z, t1, t2, t3 = y
        fac = 1.0 + m * (x * x + yy * yy)
        if fac <= 0.0:
            raise DomainExit("geodesic left the chart")
        return np.array(
            [
                fac * t1,
                fac * t2,
                0.5 * l * (x * t2 - yy * t1) + t3,
                2.0 * m * t2 * (yy * t1 - x * t2) - l * t2 * t3,
                2.0 * m * t1 * (x * t2 - yy * t1) + l * t1 * t3,
                0.0,
            ]
        )

    events = []
    if params.m < 0.0:
        def chart_edge(_s, y):
            return 1.0 + params.m * (y[0] ** 2 + y[1] ** 2) - 1e-9

        chart_edge.terminal = True
        events.append(chart_edge)

    def sampler(s_grid, cfg: NumericsConfig):
        s_grid = np.asarray(s_grid, dtype=float)
        y0 = np.concatenate([p0, v0])
        if cfg.ode_method.upper() == "RK4":
            return _rk4_states(rhs, y0, s_grid, cfg.ode_fixed_step, params)
        sol = solve_ivp(
            rhs,
            (float(s_grid[0]), float(s_grid[-1])),
            y0,
            t_eval=s_grid,
            method=cfg.ode_method,
            rtol=cfg.ode_rtol,
            atol=cfg.ode_atol,
            events=events or None,
        )
        if events and sol.t_events and len(sol.t_events[0]) > 0:
            raise DomainExit(
                f"geodesic left the chart at s = {sol.t_events[0][0]:.6f}"
            )
        if not sol.success:
            raise IntegrationFailure(f"ODE solver failed: {sol.message}")
        return sol.y[:3].T, sol.y[3:].T

    return CurveSpec(
        kind="ode_defined",
        manifold=params,
        s_range=s_range,
        sampler=sampler,
        family={
            "family": "geodesic",
            "point": [float(v) for v in p0],
            "direction": [float(v) for v in v0],
            "manifold": {"m": params.m, "l": params.l},
        },
    )


def one_param_subgroup(
    direction,
    s_range: tuple[float, float] = (0.0, 20.0),
    params: ManifoldParams = HEISENBERG,
) -> CurveSpec:
    """The one-parameter subgroup u -> exp(u X) of the Heisenberg group.

    For the Heisenberg multiplication these are the straight lines
    u -> (A u, B u, C u); their frame velocity is the constant (A, B, C).
    """
    if not params.is_heisenberg:
        raise UnsupportedManifold(
            "one-parameter subgroups are implemented only for (m, l) = (0, 1)"
        )
    v = _require_unit(direction, "subgroup direction")

    def point_fn(s):
        s = np.asarray(s, dtype=float)
        return s[..., None] * v

    def const_velocity(s):
        s = np.asarray(s, dtype=float)
        return np.broadcast_to(v, s.shape + (3,)).copy()

    return CurveSpec(
        kind="closed_form",
        manifold=HEISENBERG,
        s_range=s_range,
        point_fn=point_fn,
        velocity_fn=const_velocity,
        frame_velocity_fn=const_velocity,
        family={"family": "one_param_subgroup", "direction": [float(c) for c in v]},
    )


def b3zero_curve(
    alpha: Callable,
    s_range: tuple[float, float],
    start=(0.0, 0.0, 0.0),
) -> CurveSpec:
    """Unit-speed curve with tangent

        T = sin(alpha) cos(beta) e1 + sin(alpha) sin(beta) e2 + cos(alpha) e3,
        beta(s) = integral of cos(alpha),

    for a strictly increasing profile angle alpha(s).  The resulting curve
    has vanishing third binormal component, torsion -1/2, geodesic curvature
    alpha', and is never biharmonic.

    beta and the positions are accumulated with 4th-order quadrature on a
    grid refined ``quad_refine`` times (from the sampling config) relative to
    the sample grid; no extra ODE state is introduced.
    """
    start = mf.as_point(start)

    def sampler(s_grid, cfg: NumericsConfig):
        s_grid = np.asarray(s_grid, dtype=float)
        n = len(s_grid)
        refine = max(2, int(cfg.quad_refine))
        fine = np.linspace(s_grid[0], s_grid[-1], (n - 1) * refine + 1)
        try:
            a_vals = np.asarray(alpha(fine), dtype=float)
            if a_vals.shape != fine.shape:
                raise TypeError
        except TypeError:
            a_vals = np.array([float(alpha(t)) for t in fine])
        if np.any(np.diff(a_vals) <= 0.0):
            raise NonMonotoneAlpha("alpha(s) must be strictly increasing")
        delta = fine[1] - fine[0]
        beta = cumulative_simpson(np.cos(a_vals), dx=delta)
        sin_a = np.sin(a_vals)
        T1 = sin_a * np.cos(beta)
        T2 = sin_a * np.sin(beta)
        T3 = np.cos(a_vals)
        x = start[0] + cumulative_simpson(T1, dx=delta)
        y = start[1] + cumulative_simpson(T2, dx=delta)
        dz = T3 - 0.5 * y * T1 + 0.5 * x * T2
        z = start[2] + cumulative_simpson(dz, dx=delta)
        sel = slice(None, None, refine)
        pts = np.stack([x[sel], y[sel], z[sel]], axis=-1)
        vel = np.stack([T1[sel], T2[sel], T3[sel]], axis=-1)
        return pts, vel

    return CurveSpec(
        kind="ode_defined",
        manifold=HEISENBERG,
        s_range=s_range,
        sampler=sampler,
        family={"family": "b3zero"},
    )


def tangent_driven_curve(
    params: ManifoldParams,
    frame_tangent_fn: Callable,
    p0,
    s_range: tuple[float, float],
) -> CurveSpec:
    """Integrate a curve from prescribed unit frame components of its tangent.

    Works on any member of the metric family; used to produce non-geodesic
    test curves away from the Heisenberg parameters.
    """
    p0 = mf.as_point(p0)

    def rhs(s, p):
        T = np.asarray(frame_tangent_fn(s), dtype=float)
        E = mf.frame_at(params, p)
        return T @ E

    def sampler(s_grid, cfg: NumericsConfig):
        s_grid = np.asarray(s_grid, dtype=float)
        sol = solve_ivp(
            rhs,
            (float(s_grid[0]), float(s_grid[-1])),
            p0,
            t_eval=s_grid,
            method=cfg.ode_method,
            rtol=cfg.ode_rtol,
            atol=cfg.ode_atol,
        )
        if not sol.success:
            raise IntegrationFailure(f"ODE solver failed: {sol.message}")
        vel = np.stack([np.asarray(frame_tangent_fn(t), dtype=float) for t in s_grid])
        return sol.y.T, vel

    return CurveSpec(
        kind="ode_defined",
        manifold=params,
        s_range=s_range,
        sampler=sampler,
        family={"family": "tangent_driven", "manifold": {"m": params.m, "l": params.l}},
    )


# ---------------------------------------------------------------------------
# The cylinder S and helicoid S' containing the helix
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SurfacePatch:
    """Evaluation-only parametrization of the cylinder or helicoid."""

    kind: str  # "cylinder" | "helicoid"
    alpha0: float
    rate: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        if self.kind not in ("cylinder", "helicoid"):
            raise ValueError(f"unknown surface kind {self.kind!r}")

    @property
    def radius(self) -> float:
        return abs(math.sin(self.alpha0) / self.rate)


def cylinder_patch(hp: HelixParams) -> SurfacePatch:
    A = solve_branch_A(hp.alpha0, hp.branch)
    return SurfacePatch("cylinder", hp.alpha0, A, hp.a, hp.b, hp.c, hp.d)


def helicoid_patch(hp: HelixParams) -> SurfacePatch:
    A = solve_branch_A(hp.alpha0, hp.branch)
    return SurfacePatch("helicoid", hp.alpha0, A, hp.a, hp.b, hp.c, hp.d)


def surface_eval(patch: SurfacePatch, u, v) -> np.ndarray:
    """Evaluate the patch at (u, v); broadcasts over both arguments."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    u, v = np.broadcast_arrays(u, v)
    S, C = math.sin(patch.alpha0), math.cos(patch.alpha0)
    A = patch.rate
    beta = A * u + patch.a
    if patch.kind == "cylinder":
        x = (S / A) * np.sin(beta) + patch.b
        y = -(S / A) * np.cos(beta) + patch.c
        z = v.astype(float)
    else:
        x = (v * S / A) * np.sin(beta) + patch.b
        y = -(v * S / A) * np.cos(beta) + patch.c
        z = (
            (C + S * S / (2.0 * A)) * u
            + 0.5 * patch.b * y
            - 0.5 * patch.c * x
            + patch.d
        )
    return np.stack([x, y, z], axis=-1)


def membership_residual(
    curve: CurveSpec | CurveSamples,
    patch: SurfacePatch,
    n: int = 1001,
    config: NumericsConfig = DEFAULT_CONFIG,
) -> float:
    """Worst distance of the sampled curve from the patch.

    Cylinder: radial defect |hypot(x - b, y - c) - radius|.  Helicoid:
    componentwise defect against the slice v = 1 evaluated at u = s.
    """
    samples = curve if isinstance(curve, CurveSamples) else sample_curve(curve, n, config)
    pts = samples.points
    if patch.kind == "cylinder":
        r = np.hypot(pts[:, 0] - patch.b, pts[:, 1] - patch.c)
        return float(np.abs(r - patch.radius).max())
    ref = surface_eval(patch, samples.s, np.ones_like(samples.s))
    return float(np.abs(pts - ref).max())


# ---------------------------------------------------------------------------
# Parameter files
# ---------------------------------------------------------------------------


def dump_curve_params(spec: CurveSpec, n_samples: int | None = None) -> str:
    """JSON form of a factory-built curve (family parameters only)."""
    if not spec.family:
        raise ValueError("curve carries no serializable family parameters")
    payload = dict(spec.family)
    payload.setdefault("manifold", {"m": spec.manifold.m, "l": spec.manifold.l})
    payload["s_range"] = [float(spec.s_range[0]), float(spec.s_range[1])]
    if n_samples is not None:
        payload["samples"] = int(n_samples)
    return json.dumps(payload, indent=2, sort_keys=True)


def load_curve_params(text: str) -> tuple[CurveSpec, int | None]:
    """Rebuild a CurveSpec from its JSON parameter record."""
    data = json.loads(text)
    man = data.get("manifold", {"m": 0.0, "l": 1.0})
    params = ManifoldParams(float(man["m"]), float(man["l"]))
    s_range = tuple(float(v) for v in data.get("s_range", (0.0, 10.0 * math.pi)))
    n = data.get("samples")
    family = data.get("family")
    if family == "biharmonic_helix":
        hp = HelixParams(
            alpha0=float(data["alpha0"]),
            a=float(data.get("a", 0.0)),
            b=float(data.get("b", 0.0)),
            c=float(data.get("c", 0.0)),
            d=float(data.get("d", 0.0)),
            branch=data.get("branch", "plus"),
        )
        return biharmonic_helix(hp, s_range), n
    if family == "helix_family":
        return (
            helix_family_curve(
                float(data["alpha0"]),
                float(data["rate"]),
                float(data.get("a", 0.0)),
                float(data.get("b", 0.0)),
                float(data.get("c", 0.0)),
                float(data.get("d", 0.0)),
                s_range,
            ),
            n,
        )
    if family == "one_param_subgroup":
        return one_param_subgroup(np.asarray(data["direction"], dtype=float), s_range), n
    if family == "geodesic":
        return (
            geodesic_ivp(
                params,
                np.asarray(data["point"], dtype=float),
                np.asarray(data["direction"], dtype=float),
                s_range,
            ),
            n,
        )
    if family == "b3zero_linear":
        a0 = float(data["alpha_start"])
        rate = float(data["alpha_rate"])
        return b3zero_curve(lambda s: a0 + rate * np.asarray(s, dtype=float), s_range), n
    raise ValueError(f"unknown curve family {family!r}")
