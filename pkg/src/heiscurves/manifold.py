"""Left-invariant Riemannian structure of the Heisenberg group and of its
two-parameter deformation family.

The metrics on R^3 handled here are

    ds2 = (dx^2 + dy^2) / F^2 + (dz + (l/2) (y dx - x dy) / F)^2,

with conformal factor F = 1 + m (x^2 + y^2).  The pair (m, l) = (0, 1)
gives the standard left-invariant metric of the Heisenberg group H3.  All
frame-indexed quantities refer to the adapted orthonormal frame

    e1 = F d/dx - (l y / 2) d/dz,
    e2 = F d/dy + (l x / 2) d/dz,
    e3 = d/dz,

dual to the coframe (dx / F, dy / F, dz + (l/2)(y dx - x dy) / F).

Two routes are provided for the connection and the curvature:

* closed-form tables (exact; derived from the Koszul formula applied to the
  bracket relations [e1,e2] = -2my e1 + 2mx e2 + l e3, [e2,e3] = [e3,e1] = 0),
* a numeric route that differentiates the metric with 5-point central
  finite differences and assembles coordinate Christoffel symbols; it is the
  independent cross-check of the tables and is accurate to ~1e-9.

Sign convention.  The curvature operator is

    R(X, Y)Z = -nabla_X nabla_Y Z + nabla_Y nabla_X Z + nabla_[X,Y] Z,

and R(X, Y, Z, W) = <R(X, Y)Z, W>, rho(X, Y) = trace(Z -> R(X, Z)Y).  With
this choice the sectional curvature of a plane is K(X, Y) = R(X, Y, X, Y)
for orthonormal X, Y; on H3, K(e1, e2) = -3/4 and K(e1, e3) = 1/4.

Frame indices in the public API are 1-based (a, b, ... in {1, 2, 3}) to
match the usual tensor-component notation R_1212, rho_33, ...
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    BasePointMismatch,
    DegeneratePlane,
    DomainError,
    UnsupportedManifold,
)

__all__ = [
    "ManifoldParams",
    "HEISENBERG",
    "TangentVector",
    "FrameVector",
    "as_point",
    "conformal_factor",
    "metric_at",
    "metric_derivatives",
    "frame_at",
    "coframe_at",
    "frame_vectors_at",
    "to_frame_components",
    "to_coord_components",
    "frame_to_coord",
    "coord_to_frame",
    "christoffel_coord",
    "connection_table",
    "connection_table_numeric",
    "connection_frame",
    "bracket_table",
    "lie_bracket_frame",
    "curvature_table",
    "curvature_table_numeric",
    "curvature_op",
    "riemann_component",
    "ricci_component",
    "sectional",
    "left_translate",
    "left_translate_velocity",
    "h3_connection_reference",
    "h3_riemann_reference",
    "h3_ricci_reference",
]


@dataclass(frozen=True)
class ManifoldParams:
    """Parameters (m, l) selecting one metric of the family.

    m : curvature parameter (dimensionless)
    l : twist parameter (dimensionless)
    """

    m: float = 0.0
    l: float = 1.0

    @classmethod
    def heisenberg(cls) -> "ManifoldParams":
        return cls(0.0, 1.0)

    @property
    def flatness(self) -> float:
        """The combination l^2 - 4m; zero exactly on the constant-curvature
        members of the family (curvature l^2 / 4)."""
        return self.l * self.l - 4.0 * self.m

    @property
    def is_degenerate(self) -> bool:
        return self.flatness == 0.0

    @property
    def is_heisenberg(self) -> bool:
        return self.m == 0.0 and self.l == 1.0


HEISENBERG = ManifoldParams(0.0, 1.0)


def as_point(p) -> np.ndarray:
    """Coerce to a float array of points with trailing axis of size 3."""
    q = np.asarray(p, dtype=float)
    if q.shape == () or q.shape[-1] != 3:
        raise ValueError(f"expected point(s) with 3 components, got shape {q.shape}")
    if not np.all(np.isfinite(q)):
        raise ValueError("point components must be finite")
    return q


@dataclass(frozen=True)
class TangentVector:
    """A tangent vector in the coordinate basis (d/dx, d/dy, d/dz)."""

    base: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", as_point(self.base))
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))


@dataclass(frozen=True)
class FrameVector:
    """A tangent vector in the orthonormal frame basis (e1, e2, e3).

    Frame components are invariant under left translations, which makes this
    the natural representation for curve data.
    """

    base: np.ndarray
    components: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "base", as_point(self.base))
        object.__setattr__(self, "components", np.asarray(self.components, dtype=float))

    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


def _check_same_base(*vectors: FrameVector) -> np.ndarray:
    base = vectors[0].base
    for v in vectors[1:]:
        if not np.allclose(v.base, base, rtol=0.0, atol=1e-12):
            raise BasePointMismatch(f"base points differ: {base} vs {v.base}")
    return base


def conformal_factor(params: ManifoldParams, p) -> np.ndarray:
    """F = 1 + m (x^2 + y^2); raises DomainError where F <= 0."""
    q = as_point(p)
    fac = 1.0 + params.m * (q[..., 0] ** 2 + q[..., 1] ** 2)
    if np.any(fac <= 0.0):
        raise DomainError(
            f"point outside the chart: 1 + m (x^2+y^2) <= 0 for (m, l) = "
            f"({params.m}, {params.l})"
        )
    return fac


def _twist_coefficients(params: ManifoldParams, p):
    """Coefficients (u, v) of the twist one-form theta3 = u dx + v dy + dz."""
    q = as_point(p)
    fac = conformal_factor(params, q)
    u = 0.5 * params.l * q[..., 1] / fac
    v = -0.5 * params.l * q[..., 0] / fac
    return fac, u, v


def metric_at(params: ManifoldParams, p) -> np.ndarray:
    """Gram matrix of the metric in the coordinate basis, shape (..., 3, 3).

    Exact expansion of the quadratic form; no finite differences.
    """
    q = as_point(p)
    fac, u, v = _twist_coefficients(params, q)
    w = np.stack([u, v, np.ones_like(u)], axis=-1)
    g = np.einsum("...i,...j->...ij", w, w)
    inv2 = fac ** -2
    g[..., 0, 0] += inv2
    g[..., 1, 1] += inv2
    return g


def metric_derivatives(params: ManifoldParams, p) -> np.ndarray:
    """Analytic partials dg[..., i, j, k] = d g_jk / d x^i (x^1..x^3 = x, y, z)."""
    q = as_point(p)
    m, l = params.m, params.l
    x, y = q[..., 0], q[..., 1]
    fac, u, v = _twist_coefficients(params, q)
    one = np.ones_like(fac)
    zero = np.zeros_like(fac)

    dfac = np.stack([2.0 * m * x, 2.0 * m * y, zero], axis=-1)
    # u = (l/2) y / F, v = -(l/2) x / F
    du = np.stack(
        [-l * m * x * y / fac**2, 0.5 * l * (fac - 2.0 * m * y * y) / fac**2, zero],
        axis=-1,
    )
    dv = np.stack(
        [-0.5 * l * (fac - 2.0 * m * x * x) / fac**2, l * m * x * y / fac**2, zero],
        axis=-1,
    )
    w = np.stack([u, v, one], axis=-1)
    dw = np.stack([du, dv, np.zeros_like(du)], axis=-1)  # (..., i, form index)

    dg = np.einsum("...ij,...k->...ijk", dw, w) + np.einsum(
        "...j,...ik->...ijk", w, dw
    )
    dinv2 = -2.0 * fac ** -3 * dfac
    dg[..., 0, 0] += dinv2
    dg[..., 1, 1] += dinv2
    return dg


def frame_at(params: ManifoldParams, p, validate: bool = False) -> np.ndarray:
    """Coordinate components of the orthonormal frame, shape (..., 3, 3).

    Row a holds the components of e_{a+1}.  With ``validate=True`` the Gram
    matrix of the rows is checked against the identity (1e-10).
    """
    q = as_point(p)
    fac, _, _ = _twist_coefficients(params, q)
    x, y = q[..., 0], q[..., 1]
    zero = np.zeros_like(fac)
    one = np.ones_like(fac)
    frame = np.stack(
        [
            np.stack([fac, zero, -0.5 * params.l * y], axis=-1),
            np.stack([zero, fac, 0.5 * params.l * x], axis=-1),
            np.stack([zero, zero, one], axis=-1),
        ],
        axis=-2,
    )
    if validate:
        g = metric_at(params, q)
        gram = np.einsum("...ai,...ij,...bj->...ab", frame, g, frame)
        err = np.abs(gram - np.eye(3)).max()
        if err > 1e-10:
            raise AssertionError(f"frame not orthonormal, max deviation {err:.3e}")
    return frame


def coframe_at(params: ManifoldParams, p) -> np.ndarray:
    """Coefficients of the dual coframe, shape (..., 3, 3); row a is theta^a."""
    q = as_point(p)
    fac, u, v = _twist_coefficients(params, q)
    zero = np.zeros_like(fac)
    one = np.ones_like(fac)
    return np.stack(
        [
            np.stack([1.0 / fac, zero, zero], axis=-1),
            np.stack([zero, 1.0 / fac, zero], axis=-1),
            np.stack([u, v, one], axis=-1),
        ],
        axis=-2,
    )


def frame_vectors_at(params: ManifoldParams, p) -> tuple[FrameVector, FrameVector, FrameVector]:
    """The frame (e1, e2, e3) at a single point, as FrameVector objects whose
    ``components`` are given in the coordinate basis (d/dx, d/dy, d/dz)."""
    q = as_point(p)
    rows = frame_at(params, q)
    return tuple(FrameVector(q, rows[a]) for a in range(3))  # type: ignore[return-value]


def to_frame_components(params: ManifoldParams, p, v_coord) -> np.ndarray:
    """Convert coordinate components of tangent vectors to frame components."""
    theta = coframe_at(params, p)
    return np.einsum("...ak,...k->...a", theta, np.asarray(v_coord, dtype=float))


def to_coord_components(params: ManifoldParams, p, v_frame) -> np.ndarray:
    """Convert frame components of tangent vectors to coordinate components."""
    e = frame_at(params, p)
    return np.einsum("...a,...ak->...k", np.asarray(v_frame, dtype=float), e)


def coord_to_frame(params: ManifoldParams, tv: TangentVector) -> FrameVector:
    return FrameVector(tv.base, to_frame_components(params, tv.base, tv.components))


def frame_to_coord(params: ManifoldParams, fv: FrameVector) -> TangentVector:
    return TangentVector(fv.base, to_coord_components(params, fv.base, fv.components))


# ---------------------------------------------------------------------------
# Christoffel symbols in the coordinate basis
# ---------------------------------------------------------------------------

# 5-point central first-derivative stencil (offsets +-1, +-2), 4th order.
_FD5_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_FD5_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


def _fd_metric_derivatives(params: ManifoldParams, p, h: float) -> np.ndarray:
    """dg[i, j, k] = d g_jk / d x^i by 5-point central differences."""
    q = as_point(p)
    dg = np.empty(q.shape[:-1] + (3, 3, 3))
    for i in range(3):
        shift = np.zeros(3)
        shift[i] = h
        pts = np.stack([q + o * shift for o in _FD5_OFFSETS], axis=0)
        vals = metric_at(params, pts)
        dg[..., i, :, :] = np.einsum("s,s...jk->...jk", _FD5_WEIGHTS, vals) / h
    return dg


def christoffel_coord(
    params: ManifoldParams, p, method: str = "analytic", h: float = 1e-4
) -> np.ndarray:
    """Coordinate Christoffel symbols Gamma[..., k, i, j] = Gamma^k_ij.

    ``method="analytic"`` uses the exact metric derivatives; ``method="fd"``
    differentiates the metric numerically with step ``h`` (the Koszul-formula
    cross-check path).
    """
    q = as_point(p)
    g = metric_at(params, q)
    if method == "analytic":
        dg = metric_derivatives(params, q)
    elif method == "fd":
        dg = _fd_metric_derivatives(params, q, h)
    else:
        raise ValueError(f"unknown method {method!r}")
    ginv = np.linalg.inv(g)
    # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
    bracket = dg + np.einsum("...jil->...ijl", dg) - np.einsum("...lij->...ijl", dg)
    return 0.5 * np.einsum("...kl,...ijl->...kij", ginv, bracket)


# ---------------------------------------------------------------------------
# Frame connection, brackets and curvature: closed-form tables
# ---------------------------------------------------------------------------


def connection_table(params: ManifoldParams, p) -> np.ndarray:
    """Frame connection coefficients G[..., a, b, c] = <nabla_{e_a} e_b, e_c>.

    Closed form, valid for every (m, l).  For the Heisenberg parameters the
    table is constant:

        nabla_{e1} e2 =  (1/2) e3,   nabla_{e1} e3 = -(1/2) e2,
        nabla_{e2} e1 = -(1/2) e3,   nabla_{e2} e3 =  (1/2) e1,
        nabla_{e3} e1 = -(1/2) e2,   nabla_{e3} e2 =  (1/2) e1,

    all other entries zero.  For general (m, l) the horizontal rows acquire
    the conformal terms 2mx, 2my and l/2 replaces 1/2.
    """
    q = as_point(p)
    m, l = params.m, params.l
    x, y = q[..., 0], q[..., 1]
    G = np.zeros(q.shape[:-1] + (3, 3, 3))
    hl = 0.5 * l
    G[..., 0, 0, 1] = 2.0 * m * y
    G[..., 0, 1, 0] = -2.0 * m * y
    G[..., 0, 1, 2] = hl
    G[..., 0, 2, 1] = -hl
    G[..., 1, 0, 1] = -2.0 * m * x
    G[..., 1, 0, 2] = -hl
    G[..., 1, 1, 0] = 2.0 * m * x
    G[..., 1, 2, 0] = hl
    G[..., 2, 0, 1] = -hl
    G[..., 2, 1, 0] = hl
    return G


def _connection_frame_derivatives(params: ManifoldParams, p) -> np.ndarray:
    """dG[..., x, a, b, c] = e_x(G[a, b, c]) for the closed-form table.

    Only the conformal entries vary: e1(2mx) = e2(2my) = 2mF.
    """
    q = as_point(p)
    fac = conformal_factor(params, q)
    two_mF = 2.0 * params.m * fac
    dG = np.zeros(q.shape[:-1] + (3, 3, 3, 3))
    dG[..., 1, 0, 0, 1] = two_mF   # e2(Gamma_11^2) with Gamma_11^2 = 2my
    dG[..., 1, 0, 1, 0] = -two_mF  # e2(Gamma_12^1)
    dG[..., 0, 1, 0, 1] = -two_mF  # e1(Gamma_21^2) with Gamma_21^2 = -2mx
    dG[..., 0, 1, 1, 0] = two_mF   # e1(Gamma_22^1)
    return dG


def bracket_table(params: ManifoldParams, p) -> np.ndarray:
    """Structure functions C[..., a, b, c] with [e_a, e_b] = C^c_ab e_c."""
    q = as_point(p)
    m, l = params.m, params.l
    x, y = q[..., 0], q[..., 1]
    C = np.zeros(q.shape[:-1] + (3, 3, 3))
    C[..., 0, 1, 0] = -2.0 * m * y
    C[..., 0, 1, 1] = 2.0 * m * x
    C[..., 0, 1, 2] = l
    C[..., 1, 0, :] = -C[..., 0, 1, :]
    return C


def curvature_table(params: ManifoldParams, p) -> np.ndarray:
    """R[..., a, b, c, d]: d-th frame component of R(e_a, e_b) e_c (exact).

    Assembled from the connection table, its frame derivatives and the
    structure functions:

        R(e_a, e_b) e_c = -nabla_{e_a} nabla_{e_b} e_c
                          + nabla_{e_b} nabla_{e_a} e_c
                          + nabla_{[e_a, e_b]} e_c.
    """
    q = as_point(p)
    G = connection_table(params, q)
    dG = _connection_frame_derivatives(params, q)
    C = bracket_table(params, q)
    second = np.einsum("...bcd,...ade->...abce", G, G)
    R = (
        -np.einsum("...abce->...abce", dG)
        + np.einsum("...bace->...abce", dG)
        - second
        + np.einsum("...bace->...abce", second)
        + np.einsum("...abd,...dce->...abce", C, G)
    )
    return R


# ---------------------------------------------------------------------------
# Numeric cross-check route (finite differences through the metric)
# ---------------------------------------------------------------------------


def _fd_frame_coefficient_derivatives(params: ManifoldParams, p, h: float) -> np.ndarray:
    """dE[i, a, k] = d (e_a)^k / d x^i by 5-point central differences."""
    q = as_point(p)
    dE = np.empty(q.shape[:-1] + (3, 3, 3))
    for i in range(3):
        shift = np.zeros(3)
        shift[i] = h
        pts = np.stack([q + o * shift for o in _FD5_OFFSETS], axis=0)
        vals = frame_at(params, pts)
        dE[..., i, :, :] = np.einsum("s,s...ak->...ak", _FD5_WEIGHTS, vals) / h
    return dE


def connection_table_numeric(params: ManifoldParams, p, h: float = 1e-4) -> np.ndarray:
    """Frame connection coefficients via finite differences of the metric.

    nabla_{e_a} e_b = e_a^i (d_i e_b^k + Gamma^k_ij e_b^j) d/dx^k, converted
    to frame components with the coframe.  Independent of the closed-form
    table; agreement is ~1e-9 with the default step.
    """
    q = as_point(p)
    E = frame_at(params, q)
    theta = coframe_at(params, q)
    Gam = christoffel_coord(params, q, method="fd", h=h)
    dE = _fd_frame_coefficient_derivatives(params, q, h)
    cov = np.einsum("...ai,...ibk->...abk", E, dE) + np.einsum(
        "...ai,...kij,...bj->...abk", E, Gam, E
    )
    return np.einsum("...abk,...ck->...abc", cov, theta)


def bracket_table_numeric(params: ManifoldParams, p, h: float = 1e-4) -> np.ndarray:
    """Structure functions via finite differences of the frame coefficients."""
    q = as_point(p)
    E = frame_at(params, q)
    theta = coframe_at(params, q)
    dE = _fd_frame_coefficient_derivatives(params, q, h)
    brk = np.einsum("...ai,...ibk->...abk", E, dE) - np.einsum(
        "...bi,...iak->...abk", E, dE
    )
    return np.einsum("...abk,...ck->...abc", brk, theta)


def curvature_table_numeric(
    params: ManifoldParams, p, h: float = 1e-4, h_outer: float = 1e-3
) -> np.ndarray:
    """Frame curvature components via nested finite differences.

    Coordinate curvature (in the convention above) from numerically
    differentiated Christoffel symbols, contracted with the frame.  The outer
    step ``h_outer`` is larger than ``h`` to keep the roundoff of the nested
    first-derivative stencils below ~5e-9.
    """
    q = as_point(p)
    if q.ndim != 1:
        raise ValueError("numeric curvature path expects a single point")
    Gam = christoffel_coord(params, q, method="fd", h=h)
    dGam = np.empty((3, 3, 3, 3))
    for i in range(3):
        shift = np.zeros(3)
        shift[i] = h_outer
        vals = np.stack(
            [christoffel_coord(params, q + o * shift, method="fd", h=h) for o in _FD5_OFFSETS],
            axis=0,
        )
        dGam[i] = np.einsum("s,skab->kab", _FD5_WEIGHTS, vals) / h_outer
    # Standard convention first: Rstd^l_kij = d_i G^l_jk - d_j G^l_ik
    #                                        + G^l_im G^m_jk - G^l_jm G^m_ik
    Rstd = (
        np.einsum("iljk->lkij", dGam)
        - np.einsum("jlik->lkij", dGam)
        + np.einsum("lim,mjk->lkij", Gam, Gam)
        - np.einsum("ljm,mik->lkij", Gam, Gam)
    )
    E = frame_at(params, q)
    theta = coframe_at(params, q)
    # Curvature is tensorial, so frame components follow by pure contraction;
    # the leading minus converts to the package sign convention.
    return -np.einsum("ai,bj,ck,lkij,dl->abcd", E, E, E, Rstd, theta)


# ---------------------------------------------------------------------------
# Operator-level API
# ---------------------------------------------------------------------------


def _check_index(*indices: int) -> None:
    for a in indices:
        if a not in (1, 2, 3):
            raise IndexError(f"frame index must be in {{1, 2, 3}}, got {a}")


def connection_frame(
    params: ManifoldParams, p, a: int, b: int, method: str = "closed_form", h: float = 1e-4
) -> FrameVector:
    """nabla_{e_a} e_b at p, in frame components (1-based indices)."""
    _check_index(a, b)
    q = as_point(p)
    if method == "closed_form":
        G = connection_table(params, q)
    elif method == "numeric":
        G = connection_table_numeric(params, q, h=h)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FrameVector(q, G[..., a - 1, b - 1, :])


def lie_bracket_frame(
    params: ManifoldParams, p, a: int, b: int, method: str = "closed_form", h: float = 1e-4
) -> FrameVector:
    """[e_a, e_b] at p, in frame components (1-based indices)."""
    _check_index(a, b)
    q = as_point(p)
    if method == "closed_form":
        C = bracket_table(params, q)
    elif method == "numeric":
        C = bracket_table_numeric(params, q, h=h)
    else:
        raise ValueError(f"unknown method {method!r}")
    return FrameVector(q, C[..., a - 1, b - 1, :])


def curvature_op(
    params: ManifoldParams,
    X: FrameVector,
    Y: FrameVector,
    Z: FrameVector,
    method: str = "closed_form",
) -> FrameVector:
    """R(X, Y)Z for frame vectors at a common base point."""
    base = _check_same_base(X, Y, Z)
    if method == "closed_form":
        table = curvature_table(params, base)
    elif method == "numeric":
        table = curvature_table_numeric(params, base)
    else:
        raise ValueError(f"unknown method {method!r}")
    comps = np.einsum(
        "a,b,c,abcd->d", X.components, Y.components, Z.components, table
    )
    return FrameVector(base, comps)


def riemann_component(
    params: ManifoldParams, p, a: int, b: int, c: int, d: int, method: str = "closed_form"
) -> float:
    """R_abcd = <R(e_a, e_b) e_c, e_d> (1-based indices)."""
    _check_index(a, b, c, d)
    q = as_point(p)
    if method == "closed_form":
        table = curvature_table(params, q)
    else:
        table = curvature_table_numeric(params, q)
    return float(table[..., a - 1, b - 1, c - 1, d - 1])


def ricci_component(
    params: ManifoldParams, p, a: int, b: int, method: str = "closed_form"
) -> float:
    """rho_ab = trace(Z -> R(e_a, Z) e_b) (1-based indices)."""
    _check_index(a, b)
    q = as_point(p)
    if method == "closed_form":
        table = curvature_table(params, q)
    else:
        table = curvature_table_numeric(params, q)
    # rho(e_a, e_b) = sum_c <R(e_a, e_c) e_b, e_c>
    return float(np.trace(table[..., a - 1, :, b - 1, :]))


def sectional(params: ManifoldParams, p, X: FrameVector, Y: FrameVector) -> float:
    """Sectional curvature of the plane spanned by X and Y.

    K = R(X, Y, X, Y) / (|X|^2 |Y|^2 - <X, Y>^2); raises DegeneratePlane when
    the denominator falls below 1e-12.
    """
    base = _check_same_base(X, Y)
    x, y = X.components, Y.components
    denom = float(x @ x) * float(y @ y) - float(x @ y) ** 2
    if denom < 1e-12:
        raise DegeneratePlane(f"plane spanned by X, Y is degenerate (denominator {denom:.3e})")
    table = curvature_table(params, base)
    num = float(np.einsum("a,b,c,d,abcd->", x, y, x, y, table))
    return num / denom


# ---------------------------------------------------------------------------
# Group operations (Heisenberg only)
# ---------------------------------------------------------------------------


def _require_heisenberg(params: ManifoldParams) -> None:
    if not params.is_heisenberg:
        raise UnsupportedManifold(
            f"group operations are defined only for (m, l) = (0, 1), got "
            f"({params.m}, {params.l})"
        )


def left_translate(params: ManifoldParams, g, p) -> np.ndarray:
    """Group product L_g(p) = g * p of the Heisenberg multiplication

        (gx, gy, gz) (x, y, z) = (gx + x, gy + y, gz + z + (gx y - gy x) / 2).
    """
    _require_heisenberg(params)
    gq = as_point(g)
    q = as_point(p)
    out = np.empty(np.broadcast_shapes(gq.shape, q.shape))
    out[..., 0] = gq[..., 0] + q[..., 0]
    out[..., 1] = gq[..., 1] + q[..., 1]
    out[..., 2] = (
        gq[..., 2]
        + q[..., 2]
        + 0.5 * (gq[..., 0] * q[..., 1] - gq[..., 1] * q[..., 0])
    )
    return out


def left_translate_velocity(params: ManifoldParams, g, v_coord) -> np.ndarray:
    """Push a coordinate-basis velocity forward along L_g.

    The differential of L_g is constant in these coordinates:
    (vx, vy, vz) -> (vx, vy, vz + (gx vy - gy vx) / 2).  Frame components are
    unchanged (the frame is left-invariant).
    """
    _require_heisenberg(params)
    gq = as_point(g)
    v = np.asarray(v_coord, dtype=float)
    out = np.array(v, copy=True)
    out[..., 2] = v[..., 2] + 0.5 * (gq[..., 0] * v[..., 1] - gq[..., 1] * v[..., 0])
    return out


# ---------------------------------------------------------------------------
# Reference tables for the Heisenberg parameters (used by tests and the CLI)
# ---------------------------------------------------------------------------


def h3_connection_reference() -> np.ndarray:
    """The constant H3 connection table G[a, b, c] = <nabla_{e_a} e_b, e_c>."""
    G = np.zeros((3, 3, 3))
    G[0, 1, 2] = 0.5
    G[0, 2, 1] = -0.5
    G[1, 0, 2] = -0.5
    G[1, 2, 0] = 0.5
    G[2, 0, 1] = -0.5
    G[2, 1, 0] = 0.5
    return G


def h3_riemann_reference() -> dict[tuple[int, int, int, int], float]:
    """Nonvanishing H3 components R_abcd with a < b, c < d (1-based keys)."""
    return {(1, 2, 1, 2): -0.75, (1, 3, 1, 3): 0.25, (2, 3, 2, 3): 0.25}


def h3_ricci_reference() -> dict[tuple[int, int], float]:
    return {(1, 1): -0.5, (2, 2): -0.5, (3, 3): 0.5}
