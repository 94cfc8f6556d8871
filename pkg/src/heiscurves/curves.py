"""Curves, arclength sampling, covariant differentiation and Frenet data.

Curves are always parametrized by arclength.  A curve enters the package in
one of three forms:

* ``closed_form``  -- exact callables for position (and velocity),
* ``ode_defined``  -- a sampler that integrates an ODE on a given grid,
* ``sampled``      -- imported (s, x, y, z) rows with optional velocities.

Velocities are carried in components of the left-invariant orthonormal
frame; these are unchanged under left translations, which makes Frenet data
manifestly translation-invariant.

Torsion sign convention: the Frenet system used throughout is

    nabla_T T =  k N,
    nabla_T N = -k T - tau B,
    nabla_T B =  tau N,

with k >= 0 and B = T x N in the oriented frame.  Note the sign of tau is
opposite to the convention common in the Euclidean literature.  tau is
invariant under flipping the sign of N (B flips along with it), so the
measured torsion does not depend on the orientation choice for N.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import manifold as mf
from .errors import (
    BasePointMismatch,
    NonMonotone,
    NonUnitSpeed,
    TooFewSamples,
)
from .manifold import FrameVector, ManifoldParams
from .numerics import (
    DEFAULT_CONFIG,
    NumericsConfig,
    derivative_on_grid,
    interior_slice,
)

__all__ = [
    "CurveSpec",
    "CurveSample",
    "CurveSamples",
    "FrenetSeries",
    "sample_curve",
    "covariant_derivative_along",
    "frenet_apparatus",
    "frame_cross",
    "left_translate_curve",
    "left_translate_samples",
    "make_sampled_spec",
    "write_samples_csv",
    "read_samples_csv",
    "frenet_to_json",
]


@dataclass(frozen=True)
class CurveSpec:
    """A parametrized curve on one manifold of the family.

    Exactly one payload is populated, matching ``kind``:

    closed_form   point_fn (and frame_velocity_fn or velocity_fn),
    ode_defined   sampler(s_grid, config) -> (points, frame_velocities),
    sampled       s / points (and optionally frame velocities).

    ``family`` carries the serializable constructor parameters, when the
    curve came from one of the factory families.
    """

    kind: str
    manifold: ManifoldParams
    s_range: tuple[float, float]
    point_fn: Optional[Callable] = None
    velocity_fn: Optional[Callable] = None
    frame_velocity_fn: Optional[Callable] = None
    sampler: Optional[Callable] = None
    sampled_s: Optional[np.ndarray] = None
    sampled_points: Optional[np.ndarray] = None
    sampled_velocity_frame: Optional[np.ndarray] = None
    family: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("closed_form", "ode_defined", "sampled"):
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if self.kind == "closed_form" and self.point_fn is None:
            raise ValueError("closed_form curve needs point_fn")
        if self.kind == "ode_defined" and self.sampler is None:
            raise ValueError("ode_defined curve needs a sampler")
        if self.kind == "sampled" and (
            self.sampled_s is None or self.sampled_points is None
        ):
            raise ValueError("sampled curve needs s and point arrays")


@dataclass(frozen=True)
class CurveSample:
    """One arclength sample: position and unit frame velocity."""

    s: float
    point: np.ndarray
    velocity: FrameVector


@dataclass
class CurveSamples:
    """Uniform arclength samples of a curve (struct-of-arrays layout).

    ``velocity_depth`` counts derivative passes already spent producing the
    velocities: 0 for analytic / ODE-state velocities, 1 when they were
    differenced from imported positions.  Interior masks widen accordingly,
    so boundary-stencil contamination never enters pass/fail statistics.
    """

    manifold: ManifoldParams
    s: np.ndarray               # (n,)
    points: np.ndarray          # (n, 3) coordinates
    velocity_frame: np.ndarray  # (n, 3) frame components, unit rows
    velocity_depth: int = 0

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    def velocity_coord(self) -> np.ndarray:
        return mf.to_coord_components(self.manifold, self.points, self.velocity_frame)

    def interior(self, order: int, depth: int = 1) -> slice:
        return interior_slice(self.n, order, depth + self.velocity_depth)

    def __getitem__(self, i: int) -> CurveSample:
        return CurveSample(
            float(self.s[i]),
            self.points[i],
            FrameVector(self.points[i], self.velocity_frame[i]),
        )


def _uniform_grid(s_range: tuple[float, float], n: int) -> np.ndarray:
    s0, s1 = float(s_range[0]), float(s_range[1])
    if not s1 > s0:
        raise ValueError("s_range must be increasing")
    return np.linspace(s0, s1, n)


def _validate_unit_speed(
    vel_frame: np.ndarray, config: NumericsConfig, check: slice | None = None
) -> None:
    norms = np.linalg.norm(vel_frame, axis=1)
    region = norms[check] if check is not None else norms
    offset = check.start if (check is not None and check.start) else 0
    dev = np.abs(region - 1.0)
    worst = int(np.argmax(dev))
    if dev[worst] > config.unit_speed_tol:
        raise NonUnitSpeed(
            f"|velocity| deviates from 1 by {dev[worst]:.3e} at sample "
            f"{worst + offset} (tolerance {config.unit_speed_tol:.1e})"
        )


def _check_uniform_s(s: np.ndarray) -> float:
    steps = np.diff(s)
    if np.any(steps <= 0.0):
        bad = int(np.argmax(steps <= 0.0))
        raise NonMonotone(f"arclength not strictly increasing at row {bad + 1}")
    mean = float(steps.mean())
    jitter = np.abs(steps - mean)
    if jitter.max() > 1e-9 * max(1.0, abs(mean)):
        bad = int(np.argmax(jitter))
        raise NonMonotone(
            f"non-uniform arclength spacing at row {bad + 1}: step {steps[bad]:.12g}"
            f" vs mean {mean:.12g}"
        )
    return mean


def sample_curve(
    spec: CurveSpec, n: int | None = None, config: NumericsConfig = DEFAULT_CONFIG
) -> CurveSamples:
    """Evaluate ``n`` uniform arclength samples of a curve.

    Velocities come from the analytic derivative (closed form), the ODE
    state (ode_defined) or central differences of the positions (sampled
    without velocity columns).  Unit speed is enforced on the interior
    samples; boundary samples of differentiated imports use one-sided
    stencils and are excluded from the check.
    """
    if spec.kind == "sampled":
        s = np.asarray(spec.sampled_s, dtype=float)
        if n is not None and n != len(s):
            raise ValueError(
                f"sampled curve provides {len(s)} rows; resampling to n={n} "
                "is not supported"
            )
        _check_uniform_s(s)
        points = np.asarray(spec.sampled_points, dtype=float)
        if spec.sampled_velocity_frame is not None:
            vel = np.asarray(spec.sampled_velocity_frame, dtype=float)
            check = slice(0, len(s))
            depth = 0
        else:
            if len(s) < 9:
                raise TooFewSamples("need at least 9 samples to differentiate positions")
            ds = float(s[1] - s[0])
            v_coord = derivative_on_grid(points, ds, config.stencil_order)
            vel = mf.to_frame_components(spec.manifold, points, v_coord)
            check = interior_slice(len(s), config.stencil_order, 1)
            depth = 1
        samples = CurveSamples(spec.manifold, s, points, vel, velocity_depth=depth)
        _validate_unit_speed(vel, config, check)
        return samples

    if n is None:
        raise ValueError("n is required for closed_form and ode_defined curves")
    if n < 9:
        raise TooFewSamples(f"need n >= 9 samples, got {n}")
    s = _uniform_grid(spec.s_range, n)

    if spec.kind == "closed_form":
        points = np.asarray(spec.point_fn(s), dtype=float)
        if spec.frame_velocity_fn is not None:
            vel = np.asarray(spec.frame_velocity_fn(s), dtype=float)
        elif spec.velocity_fn is not None:
            v_coord = np.asarray(spec.velocity_fn(s), dtype=float)
            vel = mf.to_frame_components(spec.manifold, points, v_coord)
        else:
            raise ValueError("closed_form curve carries no velocity rule")
    else:  # ode_defined
        points, vel = spec.sampler(s, config)
        points = np.asarray(points, dtype=float)
        vel = np.asarray(vel, dtype=float)

    samples = CurveSamples(spec.manifold, s, points, vel)
    _validate_unit_speed(vel, config)
    return samples


def covariant_derivative_along(
    samples: CurveSamples, field: np.ndarray, config: NumericsConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """nabla_T V along the curve for a field V given in frame components.

    Componentwise arclength derivative (stencil order from the config) plus
    the connection correction contracted with the velocity:

        (nabla_T V)^a = dV^a/ds + Gamma_ij^a T^i V^j.

    On the Heisenberg group this reduces to the familiar component formula
    (V1' + (T2 V3 + T3 V2)/2, V2' - (T1 V3 + T3 V1)/2, V3' + (T1 V2 - T2 V1)/2).
    Boundary samples use one-sided stencils.
    """
    V = np.asarray(field, dtype=float)
    if V.shape != samples.points.shape:
        raise ValueError("field must provide frame components at every sample")
    dV = derivative_on_grid(V, samples.ds, config.stencil_order)
    gamma = mf.connection_table(samples.manifold, samples.points)
    return dV + np.einsum("ni,nj,nija->na", samples.velocity_frame, V, gamma)


def frame_cross(X: FrameVector, Y: FrameVector) -> FrameVector:
    """Cross product in the oriented orthonormal frame (e1 x e2 = e3)."""
    if not np.allclose(X.base, Y.base, rtol=0.0, atol=1e-12):
        raise BasePointMismatch("cross product needs a common base point")
    return FrameVector(X.base, np.cross(X.components, Y.components))


@dataclass
class FrenetSeries:
    """Frenet apparatus along a sampled curve.

    Where the geodesic curvature k falls to the floor the normal direction
    is numerically meaningless; there N, B and tau are NaN and ``defined``
    is False rather than reporting zeros.
    """

    manifold: ManifoldParams
    s: np.ndarray
    T: np.ndarray          # (n, 3) frame components
    k: np.ndarray          # (n,)
    N: np.ndarray          # (n, 3), NaN where undefined
    B: np.ndarray          # (n, 3), NaN where undefined
    tau: np.ndarray        # (n,), NaN where undefined
    defined: np.ndarray    # (n,) bool
    points: np.ndarray     # (n, 3) base points
    stencil_order: int
    velocity_depth: int = 0

    @property
    def n(self) -> int:
        return len(self.s)

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])

    @property
    def T3(self) -> np.ndarray:
        return self.T[:, 2]

    @property
    def N3(self) -> np.ndarray:
        return self.N[:, 2]

    @property
    def B3(self) -> np.ndarray:
        return self.B[:, 2]

    def interior(self, depth: int = 1) -> slice:
        return interior_slice(self.n, self.stencil_order, depth + self.velocity_depth)


def frenet_apparatus(
    samples: CurveSamples, config: NumericsConfig = DEFAULT_CONFIG
) -> FrenetSeries:
    """T, N, B, k, tau and the third frame components along the curve.

    T is the sampled velocity; k = |nabla_T T|; N = nabla_T T / k wherever
    k exceeds the configured floor; B = T x N; tau = -<nabla_T N, B>.
    """
    T = samples.velocity_frame
    t1 = covariant_derivative_along(samples, T, config)
    k = np.linalg.norm(t1, axis=1)
    defined = k > config.k_floor

    N = np.full_like(T, np.nan)
    N[defined] = t1[defined] / k[defined, None]
    B = np.cross(T, N)
    dN = covariant_derivative_along(samples, N, config) if defined.any() else np.full_like(T, np.nan)
    tau = -np.einsum("ni,ni->n", dN, B)

    return FrenetSeries(
        manifold=samples.manifold,
        s=samples.s,
        T=np.array(T, copy=True),
        k=k,
        N=N,
        B=B,
        tau=tau,
        defined=defined,
        points=np.array(samples.points, copy=True),
        stencil_order=config.stencil_order,
        velocity_depth=samples.velocity_depth,
    )


# ---------------------------------------------------------------------------
# Left translation of whole curves
# ---------------------------------------------------------------------------


def left_translate_samples(g, samples: CurveSamples) -> CurveSamples:
    """Translate sampled data; frame velocities are untouched by design."""
    pts = mf.left_translate(samples.manifold, g, samples.points)
    return CurveSamples(
        samples.manifold, np.array(samples.s, copy=True), pts,
        np.array(samples.velocity_frame, copy=True),
        velocity_depth=samples.velocity_depth,
    )


def left_translate_curve(g, spec: CurveSpec) -> CurveSpec:
    """The curve s -> L_g(gamma(s)) on the Heisenberg group."""
    params = spec.manifold
    g_arr = mf.as_point(g)
    # Raise UnsupportedManifold early for (m, l) != (0, 1).
    mf.left_translate(params, g_arr, np.zeros(3))

    if spec.kind == "sampled":
        pts = mf.left_translate(params, g_arr, np.asarray(spec.sampled_points, dtype=float))
        return CurveSpec(
            kind="sampled",
            manifold=params,
            s_range=spec.s_range,
            sampled_s=np.array(spec.sampled_s, copy=True),
            sampled_points=pts,
            sampled_velocity_frame=None
            if spec.sampled_velocity_frame is None
            else np.array(spec.sampled_velocity_frame, copy=True),
            family={**spec.family, "translated_by": list(map(float, g_arr))},
        )

    if spec.kind == "closed_form":
        base_point = spec.point_fn
        base_vel = spec.velocity_fn

        def point_fn(s):
            return mf.left_translate(params, g_arr, base_point(s))

        velocity_fn = None
        if base_vel is not None:
            def velocity_fn(s):
                return mf.left_translate_velocity(params, g_arr, base_vel(s))

        return CurveSpec(
            kind="closed_form",
            manifold=params,
            s_range=spec.s_range,
            point_fn=point_fn,
            velocity_fn=velocity_fn,
            frame_velocity_fn=spec.frame_velocity_fn,
            family={**spec.family, "translated_by": list(map(float, g_arr))},
        )

    base_sampler = spec.sampler

    def sampler(s_grid, config):
        pts, vel = base_sampler(s_grid, config)
        return mf.left_translate(params, g_arr, pts), vel

    return CurveSpec(
        kind="ode_defined",
        manifold=params,
        s_range=spec.s_range,
        sampler=sampler,
        family={**spec.family, "translated_by": list(map(float, g_arr))},
    )


# ---------------------------------------------------------------------------
# Interchange formats
# ---------------------------------------------------------------------------


def make_sampled_spec(
    manifold: ManifoldParams,
    s: np.ndarray,
    points: np.ndarray,
    velocity_frame: np.ndarray | None = None,
) -> CurveSpec:
    s = np.asarray(s, dtype=float)
    return CurveSpec(
        kind="sampled",
        manifold=manifold,
        s_range=(float(s[0]), float(s[-1])),
        sampled_s=s,
        sampled_points=np.asarray(points, dtype=float),
        sampled_velocity_frame=None
        if velocity_frame is None
        else np.asarray(velocity_frame, dtype=float),
    )


def write_samples_csv(path, samples: CurveSamples, include_velocity: bool = False) -> None:
    """Write rows ``s,x,y,z`` (plus frame components ``vx,vy,vz`` on request)
    with 17 significant digits, enough for a lossless round trip."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["s", "x", "y", "z"]
        if include_velocity:
            header += ["vx", "vy", "vz"]
        writer.writerow(header)
        for i in range(samples.n):
            row = [f"{samples.s[i]:.17g}"] + [f"{c:.17g}" for c in samples.points[i]]
            if include_velocity:
                row += [f"{c:.17g}" for c in samples.velocity_frame[i]]
            writer.writerow(row)


def read_samples_csv(path, manifold: ManifoldParams) -> CurveSpec:
    """Read a ``s,x,y,z[,vx,vy,vz]`` file back into a sampled CurveSpec.

    Raises NonMonotone (with the offending row) for bad arclength columns.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        cols = [c.strip().lower() for c in header]
        if cols[:4] != ["s", "x", "y", "z"]:
            raise NonMonotone(f"unexpected header {header!r}; need s,x,y,z[,vx,vy,vz]")
        has_vel = cols[4:7] == ["vx", "vy", "vz"]
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise NonMonotone(f"unparseable number at line {lineno}: {exc}") from None
    data = np.asarray(rows, dtype=float)
    if data.ndim != 2 or data.shape[0] < 2:
        raise NonMonotone("need at least two data rows")
    s = data[:, 0]
    _check_uniform_s(s)
    points = data[:, 1:4]
    vel = data[:, 4:7] if has_vel and data.shape[1] >= 7 else None
    return make_sampled_spec(manifold, s, points, vel)


def frenet_to_json(frenet: FrenetSeries) -> str:
    """Serialize a Frenet series to JSON records (NaN encoded as null)."""

    def _clean(x):
        return None if not np.isfinite(x) else float(x)

    records = []
    for i in range(frenet.n):
        records.append(
            {
                "s": float(frenet.s[i]),
                "point": [float(c) for c in frenet.points[i]],
                "T": [float(c) for c in frenet.T[i]],
                "k": _clean(frenet.k[i]),
                "N": [_clean(c) for c in frenet.N[i]],
                "B": [_clean(c) for c in frenet.B[i]],
                "tau": _clean(frenet.tau[i]),
                "defined": bool(frenet.defined[i]),
            }
        )
    payload = {
        "manifold": {"m": frenet.manifold.m, "l": frenet.manifold.l},
        "n": frenet.n,
        "stencil_order": frenet.stencil_order,
        "records": records,
    }
    return json.dumps(payload, indent=2, sort_keys=True)
