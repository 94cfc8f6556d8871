"""Tension and bitension fields along curves, characterization systems and
curve classification.

For a unit-speed curve with tangent T the tension field is tau1 = nabla_T T
(zero exactly on geodesics) and the bitension field is

    tau2 = nabla_T^3 T + R(T, nabla_T T) T,

whose vanishing characterizes biharmonic curves.  Two independent routes
are computed:

* ``tension2_direct`` nests three covariant derivatives and adds the
  curvature correction; it needs no Frenet frame and is defined on
  geodesics.
* ``tension2_frame`` evaluates the frame expansion

    tau2 = (-3 k' k) T
         + (k'' - k^3 - k tau^2 + k l^2/4 - k (l^2 - 4m) B3^2) N
         + (-2 k' tau - k tau' + k (l^2 - 4m) N3 B3) B,

  which on the Heisenberg parameters (m, l) = (0, 1) reduces to the
  familiar 1/4 and unit coefficients.

Their agreement on every non-geodesic curve is itself a verified invariant.
A non-geodesic unit-speed curve is biharmonic if and only if

    k = const != 0,
    k^2 + tau^2 = l^2/4 - (l^2 - 4m) B3^2,
    tau' = (l^2 - 4m) N3 B3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import manifold as mf
from .curves import CurveSamples, FrenetSeries, covariant_derivative_along, frenet_apparatus
from .errors import GeodesicFrameUndefined, NonUnitVector, UnsupportedManifold
from .manifold import FrameVector, ManifoldParams
from .numerics import DEFAULT_CONFIG, NumericsConfig, derivative_on_grid

__all__ = [
    "tension1",
    "tension2_direct",
    "tension2_frame",
    "BitensionReport",
    "bitension_report",
    "SystemCheck",
    "SystemReport",
    "check_system_33",
    "check_helix_system",
    "ClassificationResult",
    "classify_curve",
    "cone_membership",
    "legendre_pairing",
    "residuals_to_csv",
]

_BITENSION_DEPTH = 3  # nested derivative passes inside tension2_direct


def tension1(samples: CurveSamples, config: NumericsConfig = DEFAULT_CONFIG) -> np.ndarray:
    """tau1 = nabla_T T in frame components, per sample."""
    return covariant_derivative_along(samples, samples.velocity_frame, config)


def tension2_direct(
    samples: CurveSamples, config: NumericsConfig = DEFAULT_CONFIG
) -> np.ndarray:
    """tau2 = nabla_T^3 T + R(T, nabla_T T) T, per sample.

    Uses nabla_T T directly in the curvature slot (equal to k N wherever the
    Frenet frame exists), so the result is defined on geodesics as well.
    """
    T = samples.velocity_frame
    t1 = covariant_derivative_along(samples, T, config)
    t2 = covariant_derivative_along(samples, t1, config)
    t3 = covariant_derivative_along(samples, t2, config)
    table = mf.curvature_table(samples.manifold, samples.points)
    curv = np.einsum("na,nb,nc,nabcd->nd", T, t1, T, table)
    return t3 + curv


def tension2_frame(
    frenet: FrenetSeries, config: NumericsConfig = DEFAULT_CONFIG
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Frame-expansion coefficients (cT, cN, cB) of the bitension field.

    k', k'' and tau' come from finite differences of the measured Frenet
    series, never from closed forms, so user-supplied curves are handled on
    the same footing as generated ones.
    """
    if not frenet.defined.any():
        raise GeodesicFrameUndefined("Frenet frame undefined along the whole curve")
    params = frenet.manifold
    lam = 0.25 * params.l * params.l
    mu = params.flatness
    k, tau = frenet.k, frenet.tau
    kp = derivative_on_grid(k, frenet.ds, frenet.stencil_order)
    kpp = derivative_on_grid(kp, frenet.ds, frenet.stencil_order)
    taup = derivative_on_grid(tau, frenet.ds, frenet.stencil_order)
    B3, N3 = frenet.B3, frenet.N3
    cT = -3.0 * kp * k
    cN = kpp - k**3 - k * tau**2 + k * lam - k * mu * B3**2
    cB = -2.0 * kp * tau - k * taup + k * mu * N3 * B3
    return cT, cN, cB


@dataclass
class BitensionReport:
    """Both routes to the bitension field plus summary residuals.

    Residual statistics cover interior samples only (boundary samples are
    computed with one-sided stencils).  ``expansion_agreement`` is the worst
    interior distance between the direct route and the reassembled frame
    expansion; it is None on geodesics, where the frame does not exist.
    """

    manifold: ManifoldParams
    s: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray
    residual: np.ndarray       # |tau2| per sample
    cT: np.ndarray | None
    cN: np.ndarray | None
    cB: np.ndarray | None
    max_residual: float
    mean_residual: float
    expansion_agreement: float | None
    interior: slice

    def to_json(self) -> str:
        payload = {
            "manifold": {"m": self.manifold.m, "l": self.manifold.l},
            "n": len(self.s),
            "max_interior_residual": self.max_residual,
            "mean_interior_residual": self.mean_residual,
            "expansion_agreement": self.expansion_agreement,
            "interior": [self.interior.start, self.interior.stop],
            "s": [float(v) for v in self.s],
            "residual": [float(v) for v in self.residual],
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def bitension_report(
    samples: CurveSamples, config: NumericsConfig = DEFAULT_CONFIG
) -> BitensionReport:
    """Evaluate tau1, tau2 (both routes where defined) and their residuals."""
    t1 = tension1(samples, config)
    t2 = tension2_direct(samples, config)
    residual = np.linalg.norm(t2, axis=1)
    interior = samples.interior(config.stencil_order, _BITENSION_DEPTH)

    frenet = frenet_apparatus(samples, config)
    cT = cN = cB = None
    agreement = None
    if frenet.defined.all():
        cT, cN, cB = tension2_frame(frenet, config)
        recon = (
            cT[:, None] * frenet.T + cN[:, None] * frenet.N + cB[:, None] * frenet.B
        )
        agreement = float(np.abs(t2 - recon)[interior].max())

    return BitensionReport(
        manifold=samples.manifold,
        s=samples.s,
        tau1=t1,
        tau2=t2,
        residual=residual,
        cT=cT,
        cN=cN,
        cB=cB,
        max_residual=float(residual[interior].max()),
        mean_residual=float(residual[interior].mean()),
        expansion_agreement=agreement,
        interior=interior,
    )


# ---------------------------------------------------------------------------
# Characterization systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemCheck:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "residual": self.residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


@dataclass
class SystemReport:
    """Measured residuals of one characterization system."""

    checks: dict[str, SystemCheck]
    values: dict[str, float] = field(default_factory=dict)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def __getitem__(self, name: str) -> SystemCheck:
        return self.checks[name]


def _interior_frenet(frenet: FrenetSeries):
    interior = frenet.interior(_BITENSION_DEPTH)
    if not frenet.defined[interior].all():
        raise GeodesicFrameUndefined(
            "Frenet frame undefined on interior samples; the curve is "
            "(locally) a geodesic"
        )
    return interior


def check_system_33(
    frenet: FrenetSeries, config: NumericsConfig = DEFAULT_CONFIG
) -> SystemReport:
    """Residuals of the non-geodesic biharmonicity system

        k = const != 0,
        k^2 + tau^2 = l^2/4 - (l^2 - 4m) B3^2,
        tau' = (l^2 - 4m) N3 B3,

    evaluated with the manifold's own coefficients (for (0, 1) this is the
    Heisenberg system with l^2/4 = 1/4 and unit coefficient).
    """
    params = frenet.manifold
    lam = 0.25 * params.l * params.l
    mu = params.flatness
    interior = _interior_frenet(frenet)

    k = frenet.k[interior]
    tau = frenet.tau[interior]
    B3 = frenet.B3[interior]
    N3 = frenet.N3[interior]
    k_mean = float(k.mean())

    k_const = float(k.max() - k.min())
    relation = float(np.abs(k**2 + tau**2 - (lam - mu * B3**2)).max())
    taup = derivative_on_grid(frenet.tau, frenet.ds, frenet.stencil_order)[interior]
    torsion = float(np.abs(taup - mu * N3 * B3).max())

    checks = {
        "k_constant": SystemCheck(
            "k_constant", k_const, config.constancy_tol * (1.0 + abs(k_mean))
        ),
        "k_nonzero": SystemCheck(
            # residual formulation: passes when k is NOT negligible
            "k_nonzero", config.k_floor, abs(k_mean)
        ),
        "algebraic_relation": SystemCheck(
            "algebraic_relation", relation, config.relation_tol
        ),
        "torsion_derivative": SystemCheck(
            "torsion_derivative", torsion, config.relation_tol
        ),
    }
    values = {
        "k_mean": k_mean,
        "tau_mean": float(tau.mean()),
        "B3_mean": float(B3.mean()),
        "N3_max": float(np.abs(N3).max()),
        "curvature_level": lam,
        "coefficient": mu,
    }
    return SystemReport(checks, values)


def check_helix_system(
    frenet: FrenetSeries, config: NumericsConfig = DEFAULT_CONFIG
) -> SystemReport:
    """Residuals of the biharmonic-helix conditions

        B3 = const != 0,  N3 = 0,  k^2 + tau^2 = l^2/4 - (l^2 - 4m) B3^2,

    together with the helix-form conditions tau = const and N3 B3 = 0."""
    params = frenet.manifold
    lam = 0.25 * params.l * params.l
    mu = params.flatness
    interior = _interior_frenet(frenet)

    k = frenet.k[interior]
    tau = frenet.tau[interior]
    B3 = frenet.B3[interior]
    N3 = frenet.N3[interior]
    tau_mean = float(tau.mean())
    B3_mean = float(B3.mean())

    checks = {
        "B3_constant": SystemCheck(
            "B3_constant", float(B3.max() - B3.min()),
            config.constancy_tol * (1.0 + abs(B3_mean)),
        ),
        "B3_nonzero": SystemCheck("B3_nonzero", config.b3_zero_tol, abs(B3_mean)),
        "N3_zero": SystemCheck("N3_zero", float(np.abs(N3).max()), config.relation_tol),
        "algebraic_relation": SystemCheck(
            "algebraic_relation",
            float(np.abs(k**2 + tau**2 - (lam - mu * B3**2)).max()),
            config.relation_tol,
        ),
        "tau_constant": SystemCheck(
            "tau_constant", float(tau.max() - tau.min()),
            config.constancy_tol * (1.0 + abs(tau_mean)),
        ),
        "N3B3_zero": SystemCheck(
            "N3B3_zero", float(np.abs(N3 * B3).max()), config.relation_tol
        ),
    }
    values = {"tau_mean": tau_mean, "B3_mean": B3_mean}
    return SystemReport(checks, values)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

VERDICTS = (
    "geodesic",
    "nongeodesic_biharmonic",
    "helix_not_biharmonic",
    "not_biharmonic",
)


@dataclass
class ClassificationResult:
    verdict: str
    checks: dict[str, SystemCheck]
    values: dict[str, float]

    @property
    def is_biharmonic(self) -> bool:
        return self.verdict in ("geodesic", "nongeodesic_biharmonic")

    def to_json(self) -> str:
        payload = {
            "verdict": self.verdict,
            "biharmonic": self.is_biharmonic,
            "checks": {name: c.as_dict() for name, c in self.checks.items()},
            "values": self.values,
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def classify_curve(
    samples: CurveSamples, config: NumericsConfig = DEFAULT_CONFIG
) -> ClassificationResult:
    """Classify a unit-speed curve.

    geodesic                 tension field vanishes (within residual_tol);
    nongeodesic_biharmonic   the full characterization system holds;
    helix_not_biharmonic     constant k and tau with B3 away from zero, but
                             the algebraic relation fails;
    not_biharmonic           everything else.  Curves with B3 ~ 0 land here
                             regardless of helix structure: a vanishing third
                             binormal component forces tau^2 = 1/4 and rules
                             biharmonicity out unconditionally.
    """
    t1 = tension1(samples, config)
    interior1 = samples.interior(config.stencil_order, 1)
    t1_max = float(np.linalg.norm(t1, axis=1)[interior1].max())
    values: dict[str, float] = {"tension1_max": t1_max}
    checks: dict[str, SystemCheck] = {
        "tension1_zero": SystemCheck("tension1_zero", t1_max, config.residual_tol)
    }

    if t1_max <= max(config.k_floor, config.residual_tol):
        return ClassificationResult("geodesic", checks, values)

    frenet = frenet_apparatus(samples, config)
    sys33 = check_system_33(frenet, config)
    helix = check_helix_system(frenet, config)
    checks.update({f"system_{k}": c for k, c in sys33.checks.items()})
    checks.update({f"helix_{k}": c for k, c in helix.checks.items()})
    values.update(sys33.values)

    if sys33.all_passed:
        verdict = "nongeodesic_biharmonic"
    elif (
        sys33["k_constant"].passed
        and helix["tau_constant"].passed
        and helix["B3_nonzero"].passed
    ):
        verdict = "helix_not_biharmonic"
    else:
        verdict = "not_biharmonic"
    return ClassificationResult(verdict, checks, values)


# ---------------------------------------------------------------------------
# Cone of biharmonic directions and the contact pairing
# ---------------------------------------------------------------------------


def cone_membership(params: ManifoldParams, X: FrameVector) -> str:
    """Whether a unit direction admits a non-geodesic biharmonic curve.

    Frame components are left-invariant, so translating X to the identity
    leaves its components unchanged; with cos(alpha0) = <X, e3> the direction
    lies in the solid cone iff 5 cos(alpha0)^2 - 4 >= 0 and sin(alpha0) != 0
    (the boundary, a double root of the rate quadratic, is included).
    """
    if not params.is_heisenberg:
        raise UnsupportedManifold("the biharmonic cone is implemented for (0, 1) only")
    nrm = X.norm()
    if abs(nrm - 1.0) > 1e-9:
        raise NonUnitVector(f"direction must be unit, |X| = {nrm:.12f}")
    cos_a = float(X.components[2])
    disc = 5.0 * cos_a * cos_a - 4.0
    sin_sq = 1.0 - cos_a * cos_a
    if disc >= -1e-12 and sin_sq > 1e-12:
        return "biharmonic_direction"
    return "geodesic_only"


def legendre_pairing(samples: CurveSamples) -> np.ndarray:
    """Value of the twist one-form on the velocity, per sample.

    On the Heisenberg group this is the contact form
    theta3 = dz - (x dy - y dx)/2; curves with vanishing pairing are
    Legendre curves.  Computed from the coordinate velocity so it provides
    an independent route to the third frame component of T.
    """
    v_coord = samples.velocity_coord()
    theta = mf.coframe_at(samples.manifold, samples.points)
    return np.einsum("nk,nk->n", theta[:, 2, :], v_coord)


def residuals_to_csv(path, report: BitensionReport) -> None:
    """Write the residual series as ``s,cT,cN,cB,residual`` rows."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "cT", "cN", "cB", "residual"])
        for i in range(len(report.s)):
            row = [f"{report.s[i]:.17g}"]
            for series in (report.cT, report.cN, report.cB):
                row.append("" if series is None else f"{series[i]:.17g}")
            row.append(f"{report.residual[i]:.17g}")
            writer.writerow(row)
