"""Curve sampling, covariant differentiation and the Frenet apparatus."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import heiscurves as hc
from heiscurves import manifold as mf
from heiscurves.curves import _check_uniform_s
from heiscurves.numerics import derivative_on_grid, stencil_weights

from conftest import FIGURE1_A, FIGURE1_ALPHA0, FIGURE1_B3, FIGURE1_K, FIGURE1_TAU

H = hc.HEISENBERG


def vertical_line_spec(x0=0.5, y0=-1.0, s_range=(0.0, 5.0)):
    """x, y constant, z = s: the integral curve of e3."""

    def point_fn(s):
        s = np.asarray(s, dtype=float)
        return np.stack([np.full_like(s, x0), np.full_like(s, y0), s], axis=-1)

    def frame_velocity_fn(s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape + (3,))
        out[..., 2] = 1.0
        return out

    return hc.CurveSpec(
        kind="closed_form",
        manifold=H,
        s_range=s_range,
        point_fn=point_fn,
        frame_velocity_fn=frame_velocity_fn,
    )


class TestStencils:
    def test_central_weights(self):
        assert_allclose(
            stencil_weights([-2, -1, 0, 1, 2]),
            [1 / 12, -8 / 12, 0, 8 / 12, -1 / 12],
            atol=1e-14,
        )
        assert_allclose(stencil_weights([-1, 0, 1]), [-0.5, 0.0, 0.5], atol=1e-14)

    def test_one_sided_order(self):
        # exact for polynomials up to the stencil order
        w = stencil_weights([0, 1, 2, 3, 4])
        xs = np.arange(5.0)
        for p in range(5):
            deriv = w @ xs**p
            assert deriv == pytest.approx(p * 0.0**max(p - 1, 0) if p != 1 else 1.0, abs=1e-10)

    def test_grid_derivative_convergence(self):
        # halving h cuts the error by >= 3x (order 2) and >= 12x (order 4)
        f = lambda s: np.sin(1.3 * s) + 0.2 * np.cos(2.1 * s)
        df = lambda s: 1.3 * np.cos(1.3 * s) - 0.42 * np.sin(2.1 * s)
        for order, factor in ((2, 3.0), (4, 12.0)):
            errs = []
            for n in (201, 401):
                s = np.linspace(0.0, 4.0, n)
                approx = derivative_on_grid(f(s), s[1] - s[0], order)
                interior = slice(4, n - 4)
                errs.append(np.abs(approx - df(s))[interior].max())
            assert errs[0] / errs[1] >= factor


class TestSampleCurve:
    def test_helix_unit_speed(self, figure1_samples):
        dev = np.abs(np.linalg.norm(figure1_samples.velocity_frame, axis=1) - 1.0)
        assert dev.max() < 1e-10

    def test_vertical_line_velocity_is_e3(self):
        samples = hc.sample_curve(vertical_line_spec(), 101)
        assert_allclose(samples.velocity_frame, np.tile([0.0, 0.0, 1.0], (101, 1)), atol=0.0)

    def test_closed_form_coordinate_velocity_route(self, figure1_hp):
        # dropping the exact frame velocities must give the same samples
        spec = hc.biharmonic_helix(figure1_hp, (0.0, 2.0 * math.pi))
        stripped = hc.CurveSpec(
            kind="closed_form",
            manifold=H,
            s_range=spec.s_range,
            point_fn=spec.point_fn,
            velocity_fn=spec.velocity_fn,
        )
        a = hc.sample_curve(spec, 301)
        b = hc.sample_curve(stripped, 301)
        assert_allclose(b.velocity_frame, a.velocity_frame, atol=1e-13)

    def test_sampled_import_matches_analytic(self, figure1_hp):
        spec = hc.biharmonic_helix(figure1_hp, (0.0, 10.0 * math.pi))
        exact = hc.sample_curve(spec, 1001)
        imported = hc.make_sampled_spec(H, exact.s, exact.points)
        samples = hc.sample_curve(imported)
        interior = samples.interior(4, 0)
        dev = np.abs(samples.velocity_frame - exact.velocity_frame)[interior].max()
        assert dev < 1e-8
        assert samples.velocity_depth == 1

    def test_sampled_import_convergence_rate(self, figure1_hp):
        errs = {}
        for n in (801, 1601):
            spec = hc.biharmonic_helix(figure1_hp, (0.0, 10.0 * math.pi))
            exact = hc.sample_curve(spec, n)
            samples = hc.sample_curve(hc.make_sampled_spec(H, exact.s, exact.points))
            interior = samples.interior(4, 0)
            errs[n] = np.abs(samples.velocity_frame - exact.velocity_frame)[interior].max()
        assert errs[801] / errs[1601] >= 12.0

    def test_too_few_samples(self, figure1_hp):
        spec = hc.biharmonic_helix(figure1_hp)
        with pytest.raises(hc.TooFewSamples):
            hc.sample_curve(spec, 8)

    def test_nonuniform_rejected(self):
        s = np.array([0.0, 0.1, 0.25, 0.3])
        with pytest.raises(hc.NonMonotone):
            _check_uniform_s(s)
        with pytest.raises(hc.NonMonotone):
            _check_uniform_s(np.array([0.0, 0.1, 0.1, 0.2]))

    def test_non_unit_speed_rejected(self):
        s = np.linspace(0.0, 1.0, 12)
        pts = np.stack([2.0 * s, np.zeros_like(s), np.zeros_like(s)], axis=-1)
        spec = hc.make_sampled_spec(H, s, pts)
        with pytest.raises(hc.NonUnitSpeed):
            hc.sample_curve(spec)


class TestCovariantDerivative:
    def test_constant_e3_along_vertical_line(self):
        samples = hc.sample_curve(vertical_line_spec(), 101)
        field = np.tile([0.0, 0.0, 1.0], (101, 1))
        out = hc.covariant_derivative_along(samples, field)
        assert np.abs(out).max() < 1e-13

    def test_velocity_along_geodesic(self):
        spec = hc.geodesic_ivp(H, [0.0, 0.0, 0.0], [0.6, 0.0, 0.8], (0.0, 10.0))
        samples = hc.sample_curve(spec, 801)
        out = hc.covariant_derivative_along(samples, samples.velocity_frame)
        interior = samples.interior(4, 1)
        assert np.linalg.norm(out, axis=1)[interior].max() < 1e-6

    def test_helix_curvature_magnitude(self, figure1_samples):
        out = hc.covariant_derivative_along(figure1_samples, figure1_samples.velocity_frame)
        interior = figure1_samples.interior(4, 1)
        k = np.linalg.norm(out, axis=1)[interior]
        expected = math.sin(FIGURE1_ALPHA0) * (math.cos(FIGURE1_ALPHA0) - FIGURE1_A)
        assert np.abs(k - expected).max() < 1e-6

    def test_heisenberg_component_formula(self, figure1_samples):
        # (T1' + T2 T3, T2' - T1 T3, T3') in the frame, checked entrywise
        T = figure1_samples.velocity_frame
        ds = figure1_samples.ds
        dT = derivative_on_grid(T, ds, 4)
        explicit = np.stack(
            [
                dT[:, 0] + T[:, 1] * T[:, 2],
                dT[:, 1] - T[:, 0] * T[:, 2],
                dT[:, 2],
            ],
            axis=-1,
        )
        out = hc.covariant_derivative_along(figure1_samples, T)
        assert_allclose(out, explicit, atol=1e-14)

    def test_field_shape_validated(self, figure1_samples):
        with pytest.raises(ValueError):
            hc.covariant_derivative_along(figure1_samples, np.zeros((5, 3)))


class TestFrenet:
    def test_helix_invariant_values(self, figure1_samples):
        fr = hc.frenet_apparatus(figure1_samples)
        interior = fr.interior(2)
        assert fr.defined[interior].all()
        assert np.abs(fr.k[interior] - FIGURE1_K).max() < 1e-6
        assert np.abs(fr.tau[interior] - FIGURE1_TAU).max() < 1e-6
        assert np.abs(fr.B3[interior] - FIGURE1_B3).max() < 1e-6
        assert np.abs(fr.N3[interior]).max() < 1e-7
        assert np.abs(fr.T3[interior] - math.cos(FIGURE1_ALPHA0)).max() < 1e-12

    def test_frame_orthonormal(self, figure1_samples):
        fr = hc.frenet_apparatus(figure1_samples)
        interior = fr.interior(2)
        frames = np.stack([fr.T[interior], fr.N[interior], fr.B[interior]], axis=1)
        gram = np.einsum("nai,nbi->nab", frames, frames)
        assert np.abs(gram - np.eye(3)).max() < 1e-6

    def test_geodesic_frame_undefined(self):
        spec = hc.geodesic_ivp(H, [0.0, 0.0, 0.0], [0.6, 0.0, 0.8], (0.0, 10.0))
        fr = hc.frenet_apparatus(hc.sample_curve(spec, 801))
        assert not fr.defined.any()
        assert np.isnan(fr.tau).all()
        assert np.isnan(fr.N).all()

    def test_frenet_equations_consistency(self):
        # <nabla_T N, T> = -k and <nabla_T B, N> = tau on a curve with
        # genuinely varying curvature
        spec = hc.b3zero_curve(lambda s: 0.4 + 0.3 * s + 0.05 * s**2, (0.0, 2.0))
        samples = hc.sample_curve(spec, 1001)
        fr = hc.frenet_apparatus(samples)
        dN = hc.covariant_derivative_along(samples, fr.N)
        dB = hc.covariant_derivative_along(samples, fr.B)
        interior = fr.interior(2)
        lhs_k = np.einsum("ni,ni->n", dN, fr.T)[interior]
        lhs_tau = np.einsum("ni,ni->n", dB, fr.N)[interior]
        assert np.abs(lhs_k + fr.k[interior]).max() < 1e-5
        assert np.abs(lhs_tau - fr.tau[interior]).max() < 1e-5

    def test_frame_component_identity(self):
        # N3' + B3/2 = -k T3 - tau B3 along non-geodesic curves
        spec = hc.b3zero_curve(lambda s: 0.4 + 0.3 * s + 0.05 * s**2, (0.0, 2.0))
        samples = hc.sample_curve(spec, 1001)
        fr = hc.frenet_apparatus(samples)
        dN3 = derivative_on_grid(fr.N3, fr.ds, fr.stencil_order)
        interior = fr.interior(2)
        lhs = dN3[interior] + 0.5 * fr.B3[interior]
        rhs = -fr.k[interior] * fr.T3[interior] - fr.tau[interior] * fr.B3[interior]
        assert np.abs(lhs - rhs).max() < 1e-5


class TestFrameCross:
    def test_orientation(self):
        p = np.zeros(3)
        e1 = mf.FrameVector(p, [1.0, 0.0, 0.0])
        e2 = mf.FrameVector(p, [0.0, 1.0, 0.0])
        assert_allclose(hc.frame_cross(e1, e2).components, [0.0, 0.0, 1.0], atol=0.0)
        assert_allclose(hc.frame_cross(e2, e1).components, [0.0, 0.0, -1.0], atol=0.0)
        assert_allclose(hc.frame_cross(e1, e1).components, np.zeros(3), atol=0.0)

    def test_base_point_mismatch(self):
        X = mf.FrameVector(np.zeros(3), [1.0, 0.0, 0.0])
        Y = mf.FrameVector(np.ones(3), [0.0, 1.0, 0.0])
        with pytest.raises(hc.BasePointMismatch):
            hc.frame_cross(X, Y)


class TestLeftInvariance:
    def test_exact_transport_is_bitwise(self, figure1_hp):
        spec = hc.biharmonic_helix(figure1_hp, (0.0, 4.0 * math.pi))
        moved = hc.left_translate_curve([3.0, -1.0, 2.0], spec)
        a = hc.frenet_apparatus(hc.sample_curve(spec, 801))
        b = hc.frenet_apparatus(hc.sample_curve(moved, 801))
        assert_allclose(b.k, a.k, atol=1e-15)
        assert_allclose(b.tau, a.tau, atol=1e-15)
        assert_allclose(b.B3, a.B3, atol=1e-15)

    def test_differentiated_import_route(self, figure1_hp):
        # velocities re-derived from translated positions: k and tau move by
        # no more than the stencil noise
        spec = hc.biharmonic_helix(figure1_hp, (0.0, 10.0 * math.pi))
        base = hc.sample_curve(spec, 2001)
        moved_pts = mf.left_translate(H, [3.0, -1.0, 2.0], base.points)
        orig = hc.frenet_apparatus(hc.sample_curve(hc.make_sampled_spec(H, base.s, base.points)))
        moved = hc.frenet_apparatus(hc.sample_curve(hc.make_sampled_spec(H, base.s, moved_pts)))
        interior = moved.interior(2)
        assert np.abs(moved.k - orig.k)[interior].max() < 1e-6
        assert np.abs(moved.tau - orig.tau)[interior].max() < 1e-6

    def test_translate_samples(self, figure1_samples):
        moved = hc.left_translate_samples([3.0, -1.0, 2.0], figure1_samples)
        assert_allclose(moved.velocity_frame, figure1_samples.velocity_frame, atol=0.0)
        assert_allclose(
            moved.points,
            mf.left_translate(H, [3.0, -1.0, 2.0], figure1_samples.points),
            atol=0.0,
        )


class TestInterchange:
    def test_csv_roundtrip(self, tmp_path, figure1_hp):
        spec = hc.biharmonic_helix(figure1_hp, (0.0, 2.0 * math.pi))
        samples = hc.sample_curve(spec, 301)
        path = tmp_path / "helix.csv"
        hc.write_samples_csv(path, samples, include_velocity=True)
        back = hc.sample_curve(hc.read_samples_csv(path, H))
        assert_allclose(back.s, samples.s, atol=0.0)
        assert_allclose(back.points, samples.points, atol=0.0)
        assert_allclose(back.velocity_frame, samples.velocity_frame, atol=0.0)

    def test_csv_positions_only(self, tmp_path, figure1_hp):
        spec = hc.biharmonic_helix(figure1_hp, (0.0, 10.0 * math.pi))
        samples = hc.sample_curve(spec, 1001)
        path = tmp_path / "pos.csv"
        hc.write_samples_csv(path, samples)
        back = hc.sample_curve(hc.read_samples_csv(path, H))
        assert back.velocity_depth == 1
        interior = back.interior(4, 0)
        assert np.abs(back.velocity_frame - samples.velocity_frame)[interior].max() < 1e-8

    def test_csv_bad_header(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(hc.NonMonotone):
            hc.read_samples_csv(path, H)

    def test_csv_bad_number_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("s,x,y,z\n0,0,0,0\n0.1,oops,0,0\n")
        with pytest.raises(hc.NonMonotone) as err:
            hc.read_samples_csv(path, H)
        assert "line 3" in str(err.value)

    def test_csv_nonmonotone_reports_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        rows = ["s,x,y,z"] + [f"{s},{s},0,0" for s in (0.0, 0.1, 0.05, 0.3)]
        path.write_text("\n".join(rows) + "\n")
        with pytest.raises(hc.NonMonotone):
            hc.read_samples_csv(path, H)

    def test_frenet_json(self, figure1_samples):
        import json

        fr = hc.frenet_apparatus(figure1_samples)
        payload = json.loads(hc.frenet_to_json(fr))
        assert payload["n"] == figure1_samples.n
        assert payload["manifold"] == {"m": 0.0, "l": 1.0}
        rec = payload["records"][len(payload["records"]) // 2]
        assert rec["defined"] is True
        assert rec["k"] == pytest.approx(FIGURE1_K, abs=1e-6)

    def test_frenet_json_geodesic_nulls(self):
        spec = hc.one_param_subgroup(np.array([0.0, 0.0, 1.0]), (0.0, 2.0))
        fr = hc.frenet_apparatus(hc.sample_curve(spec, 64))
        import json

        payload = json.loads(hc.frenet_to_json(fr))
        rec = payload["records"][10]
        assert rec["tau"] is None and rec["N"][0] is None


class TestNumericsConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            hc.NumericsConfig(fd_step=-1e-4)
        with pytest.raises(ValueError):
            hc.NumericsConfig(stencil_order=3)
        with pytest.raises(ValueError):
            hc.NumericsConfig(unit_speed_tol=0.0)

    def test_with_overrides(self):
        cfg = hc.DEFAULT_CONFIG.with_overrides(stencil_order=2, fd_step=1e-5)
        assert cfg.stencil_order == 2 and cfg.fd_step == 1e-5
        assert hc.DEFAULT_CONFIG.stencil_order == 4
