import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from minkcurve.core import lorentz
from minkcurve.core.errors import InvalidConfig, IoError
from minkcurve.repositories.file_repository import MeshRepository
from minkcurve.schemas.schemas import GeneratorSpec
from minkcurve.services.ruled_service import RuledService, gauss_curvature

GRID = (128, 16)


@pytest.fixture(scope="module")
def ruled():
    return RuledService(run_id="test")


@pytest.fixture(scope="module")
def circle_rs(ruled, circle):
    return ruled.build_ruled(circle, GRID)


@pytest.fixture(scope="module")
def ellipse_rs(ruled, tilted_ellipse):
    return ruled.build_ruled(tilted_ellipse, GRID)


@pytest.fixture(scope="module")
def random_rs(ruled, random42):
    return ruled.build_ruled(random42, GRID)


# =============================================================================
# Gauss curvature formula
# =============================================================================
class TestGaussCurvature:
    def test_hyperbolic_plane(self):
        u, v = 0.7, 1.3
        xs = np.array([np.cosh(u) * np.cos(v), np.cosh(u) * np.sin(v), np.sinh(u)])
        xt = np.array([-np.sinh(u) * np.sin(v), np.sinh(u) * np.cos(v), 0.0])
        xss = np.array([np.sinh(u) * np.cos(v), np.sinh(u) * np.sin(v), np.cosh(u)])
        xst = np.array([-np.cosh(u) * np.sin(v), np.cosh(u) * np.cos(v), 0.0])
        xtt = np.array([-np.sinh(u) * np.cos(v), -np.sinh(u) * np.sin(v), 0.0])
        assert_allclose(gauss_curvature(xs, xt, xss, xst, xtt), -1.0, rtol=1e-12)

    @pytest.mark.parametrize("x, y", [(0.0, 0.0), (0.3, -0.2), (-0.5, 0.6)])
    def test_saddle(self, x, y):
        """x3 = x1 x2 over its spacelike region."""
        xs = np.array([1.0, 0.0, y])
        xt = np.array([0.0, 1.0, x])
        zero = np.zeros(3)
        K = gauss_curvature(xs, xt, zero, np.array([0.0, 0.0, 1.0]), zero)
        assert_allclose(K, 1.0 / (1.0 - x * x - y * y) ** 2, rtol=1e-12)

    def test_plane(self):
        zero = np.zeros(3)
        assert gauss_curvature(np.array([1.0, 0.0, 0.5]), np.array([0.0, 1.0, 0.0]), zero, zero, zero) == 0.0


# =============================================================================
# Construction
# =============================================================================
class TestBuild:
    def test_circle_surface_is_flat(self, circle_rs):
        X = circle_rs.positions()
        assert X.shape == GRID + (3,)
        assert_allclose(X[..., 2], 0.0, atol=1e-14)

    def test_tilted_surface_stays_in_plane(self, ellipse_rs):
        X = ellipse_rs.positions()
        assert_allclose(X[..., 2], 0.5 * X[..., 0], atol=1e-12)

    def test_rulings_vanish_at_endpoints(self, random_rs):
        v = random_rs.ruling
        assert np.linalg.norm(v[0]) < 1e-10
        assert np.linalg.norm(v[-1]) < 1e-10

    def test_arcs_split_the_curve(self, random_rs, random42):
        assert_allclose(random_rs.half_length, 0.5 * random42.arc_length)
        assert_allclose(random_rs.q, random42.at_arclength(0.5 * random42.arc_length)[0], atol=1e-10)

    def test_start_rotates_split_point(self, ruled, random42):
        rs = ruled.build_ruled(random42, (32, 4), start=1.0)
        assert_allclose(rs.p, random42.at_arclength(1.0)[0], atol=1e-10)

    def test_grid_too_small(self, ruled, circle):
        with pytest.raises(InvalidConfig):
            ruled.build_ruled(circle, (3, 2))


# =============================================================================
# Frames
# =============================================================================
class TestFrames:
    def test_circle_frames(self, ruled, circle_rs):
        for s, t in [(0.4, 0.3), (1.5, 0.9), (0.0, 0.5)]:
            frame = ruled.frame_at(circle_rs, s, t)
            assert_allclose(frame.normal, [0.0, 0.0, 1.0], atol=1e-9)
            assert abs(frame.gauss_k) < 1e-8

    def test_t_zero_sits_on_first_arc(self, ruled, random_rs):
        s = 0.8
        g0, T0, _ = random_rs.curve.at_arclength(s)
        frame = ruled.frame_at(random_rs, s, 0.0)
        assert_allclose(frame.position, g0, atol=1e-10)
        assert_allclose(frame.xs, T0, atol=1e-10)

    def test_interior_normal_is_future_timelike(self, ruled, random_rs):
        frame = ruled.frame_at(random_rs, 0.5 * random_rs.half_length, 0.5)
        assert_allclose(lorentz.inner(frame.normal, frame.normal), -1.0, rtol=1e-10)
        assert frame.normal[2] > 0

    def test_endpoint_plane_is_osculating(self, ruled, random_rs):
        assert ruled.endpoint_plane_angle(random_rs, 0.0, 0.5) < 1e-6

    def test_plane_next_to_endpoint_tends_to_osculating(self, ruled, random42):
        angles = []
        for ns in (64, 128, 256, 512, 1024):
            rs = ruled.build_ruled(random42, (ns, 8))
            angles.append(ruled.endpoint_plane_angle(rs, rs.spacing, 0.5))
        assert angles[-1] <= angles[0] / 8
        assert angles[-1] < 1e-4

    def test_outside_domain(self, ruled, circle_rs):
        with pytest.raises(InvalidConfig):
            ruled.frame_at(circle_rs, -0.1, 0.5)

    def test_normal_splits_over_the_ruling(self, ruled, random_rs):
        """Xs x Xt = (1 - t) T0 x v + t T1 x v."""
        xs, xt, normal = ruled.normal_field(random_rs)
        v = random_rs.ruling[:, None, :]
        t = random_rs.t[None, :, None]
        expected = random_rs.orientation * (
            (1.0 - t) * lorentz.cross(random_rs.tangents0[:, None, :], v)
            + t * lorentz.cross(random_rs.tangents1[:, None, :], v)
        )
        assert_allclose(normal[1:-1], expected[1:-1], atol=1e-10)


# =============================================================================
# Surface checks
# =============================================================================
class TestSurfaceChecks:
    def test_spacelike_sweep(self, ruled, circle_rs, random_rs):
        for rs in (circle_rs, random_rs):
            report = ruled.verify_spacelike(rs)
            assert report.ok
            assert report.worst_margin < 0

    def test_near_lightlike_tilt_is_still_spacelike(self, ruled, generators):
        c = generators.generate(GeneratorSpec(kind="tilted-ellipse", a=1.0, b=1.0, c=0.99, samples=128))
        report = ruled.verify_spacelike(ruled.build_ruled(c, (64, 8)))
        assert report.ok
        assert report.worst_margin > -0.05

    def test_gauss_curvature_is_non_negative(self, ruled, random_rs):
        fields = ruled.surface_fields(random_rs)
        assert np.min(fields.gauss_k) >= -1e-6

    def test_boundary_profile_on_circle(self, ruled, circle_rs):
        profile = ruled.boundary_geodesic_curvature(circle_rs)
        assert len(profile.kappa) == 2 * GRID[0] - 2
        assert_allclose(profile.kappa_g, 1.0, rtol=1e-9)
        assert_allclose(profile.hyperbolic_angle, 0.0, atol=1e-6)
        assert profile.agreement < 1e-3

    def test_boundary_profile_on_tilted_ellipse(self, ruled, ellipse_rs):
        profile = ruled.boundary_geodesic_curvature(ellipse_rs)
        assert_allclose(profile.kappa_g, profile.kappa, rtol=1e-8)

    def test_kappa_g_dominates_kappa(self, ruled, random_rs):
        profile = ruled.boundary_geodesic_curvature(random_rs)
        assert profile.min_gap >= -1e-6
        assert profile.agreement < 1e-3

    def test_gauss_bonnet_circle(self, ruled, circle_rs):
        gb = ruled.gauss_bonnet_check(circle_rs)
        assert abs(gb.area_integral_k) < 1e-8
        assert_allclose(gb.boundary_integral_kg, 2 * np.pi, rtol=1e-9)
        assert abs(gb.residual) < 1e-8

    def test_gauss_bonnet_tilted_ellipse(self, ruled, ellipse_rs):
        assert abs(ruled.gauss_bonnet_check(ellipse_rs).residual) < 1e-4

    def test_report_replays_the_fenchel_chain(self, ruled, random_rs):
        report = ruled.report(random_rs)
        assert abs(report.residual) < 1e-3
        assert report.area_integral_k >= 0
        assert report.total_curvature <= report.boundary_integral_kg + 1e-6
        assert report.boundary_integral_kg <= 2 * np.pi + 1e-3

    def test_gauss_bonnet_residual_is_second_order(self, ruled, random42):
        residuals = [abs(ruled.gauss_bonnet_check(ruled.build_ruled(random42, grid)).residual)
                     for grid in [(64, 8), (128, 16), (256, 32)]]
        orders = np.log2(np.array(residuals[:-1]) / np.array(residuals[1:]))
        assert np.all(orders >= 1.8), orders

    def test_split_point_does_not_matter(self, ruled, random42):
        starts = np.random.default_rng(7).uniform(0.0, random42.arc_length, size=3)
        for start in starts:
            report = ruled.report(ruled.build_ruled(random42, GRID, start=float(start)))
            assert report.spacelike_ok
            assert report.min_gauss_k >= -1e-6
            assert abs(report.residual) < 1e-3
            assert report.total_curvature <= report.boundary_integral_kg + 1e-6
            assert report.boundary_integral_kg <= 2 * np.pi + 1e-3

    @pytest.mark.slow
    def test_gauss_bonnet_at_full_grid(self, ruled, random42):
        report = ruled.report(ruled.build_ruled(random42, (512, 64)))
        assert abs(report.residual) < 1e-3
        assert report.min_gauss_k >= -1e-4


# =============================================================================
# Mesh export
# =============================================================================
class TestMesh:
    def test_counts(self, ruled, circle):
        vertices, faces = ruled.mesh(ruled.build_ruled(circle, (8, 4)))
        assert vertices.shape == (32, 3)
        assert faces.shape == (42, 3)

    def test_obj_round_trip(self, ruled, random_rs, tmp_path):
        path = tmp_path / "surface.obj"
        ruled.export_mesh(random_rs, path)
        vertices, faces = MeshRepository.read_obj(path)
        expected_v, expected_f = ruled.mesh(random_rs)
        assert_array_equal(vertices, expected_v)
        assert_array_equal(faces, expected_f)

    def test_empty_path(self, ruled, circle_rs):
        with pytest.raises(IoError):
            ruled.export_mesh(circle_rs, "")
