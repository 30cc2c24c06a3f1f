import numpy as np
import pytest
from numpy.testing import assert_allclose

from minkcurve.core.errors import (
    CorrespondenceMismatch, GradientBlowup, InvalidConfig, NoConvergence, NonConvexProjection,
)
from minkcurve.models.mesh_models import ConvexDomainMesh, GraphSurface
from minkcurve.schemas.schemas import GeneratorSpec
from minkcurve.services.plateau_service import (
    PlateauService, area_functional, area_gradient, area_hessian, grad_bound, mean_curvature_defect,
)
from minkcurve.services.ruled_service import RuledService

H = 0.1
GRID = (128, 16)


@pytest.fixture(scope="module")
def plateau():
    return PlateauService(run_id="test")


@pytest.fixture(scope="module")
def ruled():
    return RuledService(run_id="test")


@pytest.fixture(scope="module")
def circle_mesh(plateau, circle):
    return plateau.build_domain(circle, H)


@pytest.fixture(scope="module")
def random_setup(plateau, ruled, random42):
    mesh = plateau.build_domain(random42, H)
    g0 = plateau.initial_guess(ruled.build_ruled(random42, GRID), mesh)
    return mesh, g0


def perturbed(plateau, random42, mesh) -> np.ndarray:
    """Harmonic extension plus a smooth interior bump: spacelike but far from maximal."""
    u = plateau.harmonic_extension(mesh, plateau.dirichlet_data(random42, mesh)).u.copy()
    x, y = mesh.vertices[:, 0], mesh.vertices[:, 1]
    i = mesh.interior
    u[i] += 0.05 * np.sin(3 * x[i]) * np.cos(2 * y[i])
    return u


# =============================================================================
# Domain
# =============================================================================
class TestDomain:
    def test_circle_mesh(self, circle_mesh):
        radius = np.linalg.norm(circle_mesh.boundary_polygon, axis=1)
        assert_allclose(radius, 1.0, atol=1e-10)
        expected = np.pi / (np.sqrt(3.0) / 4.0 * H * H)
        assert 0.75 * expected < len(circle_mesh.triangles) < 1.25 * expected

    def test_triangles_are_counterclockwise(self, circle_mesh):
        assert np.all(circle_mesh.areas > 0)
        assert_allclose(np.sum(circle_mesh.areas), _polygon_area(circle_mesh.boundary_polygon), rtol=1e-12)

    def test_boundary_follows_curve_samples(self, tilted_ellipse, plateau):
        mesh = plateau.build_domain(tilted_ellipse, H)
        assert_allclose(mesh.boundary_polygon, tilted_ellipse.points[mesh.boundary_samples, :2])
        assert _polygon_area(mesh.boundary_polygon) > 0

    def test_core_region_is_a_fixed_shrink(self, plateau, circle):
        for h in (0.2, 0.1):
            mesh = plateau.build_domain(circle, h)
            assert_allclose(mesh.centroid, 0.0, atol=1e-10)
            core_area = np.sum(mesh.areas[mesh.core_triangles()])
            assert abs(core_area - np.pi * 0.7 ** 2) < 2.0 * np.pi * 0.7 * h

    def test_limacon_projection(self, plateau, limacon):
        with pytest.raises(NonConvexProjection):
            plateau.build_domain(limacon, H)

    def test_mesh_size_must_be_positive(self, plateau, circle):
        with pytest.raises(InvalidConfig):
            plateau.build_domain(circle, 0.0)


def _polygon_area(poly):
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


# =============================================================================
# Boundary data and initial guesses
# =============================================================================
class TestBoundaryData:
    def test_circle_heights(self, plateau, circle, circle_mesh):
        assert_allclose(plateau.dirichlet_data(circle, circle_mesh), 0.0, atol=1e-15)

    def test_tilted_heights(self, plateau, tilted_ellipse):
        mesh = plateau.build_domain(tilted_ellipse, H)
        heights = plateau.dirichlet_data(tilted_ellipse, mesh)
        assert_allclose(heights, 0.5 * mesh.boundary_polygon[:, 0], atol=1e-12)

    def test_random_heights_follow_the_height_polynomial(self, plateau, generators):
        spec = GeneratorSpec(kind="random-fourier", seed=42, harmonics=3, amplitude_cap=0.15, samples=256)
        c, height = generators.generate_with_height(spec)
        mesh = plateau.build_domain(c, H)
        expected = height(c.parameters[mesh.boundary_samples])
        assert_allclose(plateau.dirichlet_data(c, mesh), expected, atol=1e-12)

    def test_mismatched_curve(self, plateau, tilted_ellipse, circle_mesh):
        with pytest.raises(CorrespondenceMismatch):
            plateau.dirichlet_data(tilted_ellipse, circle_mesh)

    def test_circle_guess_is_flat(self, plateau, ruled, circle, circle_mesh):
        g0 = plateau.initial_guess(ruled.build_ruled(circle, GRID), circle_mesh)
        assert_allclose(g0.u, 0.0, atol=1e-12)

    def test_tilted_guess_is_the_plane(self, plateau, ruled, tilted_ellipse):
        mesh = plateau.build_domain(tilted_ellipse, H)
        g0 = plateau.initial_guess(ruled.build_ruled(tilted_ellipse, GRID), mesh)
        assert_allclose(g0.u, 0.5 * mesh.vertices[:, 0], atol=1e-12)

    def test_random_guess_is_spacelike(self, random_setup):
        _, g0 = random_setup
        assert g0.grad_bound < 1.0


# =============================================================================
# Discrete area functional
# =============================================================================
class TestAreaFunctional:
    def test_gradient_matches_finite_differences(self, plateau, random42, random_setup):
        mesh, _ = random_setup
        u = perturbed(plateau, random42, mesh)
        grad = area_gradient(mesh, u)
        scale = np.linalg.norm(grad[mesh.interior])
        rng = np.random.default_rng(0)
        eps = 1e-5
        for _ in range(20):
            d = np.zeros_like(u)
            d[mesh.interior] = rng.normal(size=len(mesh.interior))
            d /= np.linalg.norm(d)
            fd = (area_functional(mesh, u + eps * d) - area_functional(mesh, u - eps * d)) / (2 * eps)
            exact = grad @ d
            assert abs(fd - exact) <= 1e-6 * max(abs(exact), scale)

    def test_hessian_matches_finite_differences(self, plateau, random42, random_setup):
        mesh, _ = random_setup
        u = perturbed(plateau, random42, mesh)
        d = np.zeros_like(u)
        d[mesh.interior] = np.random.default_rng(1).normal(size=len(mesh.interior))
        eps = 1e-5
        fd = (area_gradient(mesh, u + eps * d) - area_gradient(mesh, u - eps * d)) / (2 * eps)
        exact = area_hessian(mesh, u) @ d
        assert np.linalg.norm(fd - exact) <= 1e-5 * np.linalg.norm(exact)

    def test_timelike_graph(self, circle_mesh):
        with pytest.raises(GradientBlowup):
            area_functional(circle_mesh, 2.0 * circle_mesh.vertices[:, 0])


# =============================================================================
# Solver
# =============================================================================
class TestSolveMaximal:
    def test_flat_disk(self, plateau, circle_mesh):
        g0 = GraphSurface(mesh=circle_mesh, u=np.zeros(len(circle_mesh.vertices)), grad_bound=0.0)
        g, log = plateau.solve_maximal(g0)
        assert log.converged and log.iterations == 1
        assert np.max(np.abs(g.u)) <= 1e-12
        report = plateau.verify_maximal(g)
        assert report.grad_bound == 0.0
        assert report.residual_norm == 0.0
        assert_allclose(report.area_value, np.sum(circle_mesh.areas))

    def test_tilted_plane_is_reproduced(self, plateau, ruled, tilted_ellipse):
        mesh = plateau.build_domain(tilted_ellipse, H)
        g0 = plateau.initial_guess(ruled.build_ruled(tilted_ellipse, GRID), mesh)
        g, log = plateau.solve_maximal(g0)
        assert log.converged
        assert_allclose(g.u, 0.5 * mesh.vertices[:, 0], atol=1e-12)
        assert_allclose(plateau.verify_maximal(g).grad_bound, 0.5, atol=1e-12)

    def test_random_curve(self, plateau, random_setup):
        mesh, g0 = random_setup
        g, log = plateau.solve_maximal(g0, tol=1e-10)
        assert log.converged
        assert all(b < 1.0 for b in log.grad_history)
        assert np.all(np.diff(log.area_history) >= -1e-12)
        report = plateau.verify_maximal(g)
        assert report.residual_norm < 1e-10
        assert report.grad_bound < 1.0
        assert report.area_value >= area_functional(mesh, g0.u) - 1e-12

    def test_solution_is_unique(self, plateau, random42, random_setup):
        mesh, g0 = random_setup
        g, _ = plateau.solve_maximal(g0, tol=1e-10)
        alternative = plateau.harmonic_extension(mesh, plateau.dirichlet_data(random42, mesh))
        checked, gap = plateau.compare_solutions(g, alternative, tol=1e-10, max_iter=50)
        assert checked
        assert gap < 1e-6

    def test_mirror_image_solves_to_the_mirrored_graph(self, plateau, random_setup):
        mesh, g0 = random_setup
        mirror = ConvexDomainMesh(
            vertices=mesh.vertices * np.array([-1.0, 1.0]),
            triangles=mesh.triangles[:, [0, 2, 1]],
            boundary_samples=mesh.boundary_samples,
            target_h=mesh.target_h,
        )
        assert np.all(mirror.areas > 0)
        g, _ = plateau.solve_maximal(g0, tol=1e-10)
        m, _ = plateau.solve_maximal(GraphSurface(mesh=mirror, u=g0.u, grad_bound=g0.grad_bound), tol=1e-10)
        assert_allclose(m.u, g.u, atol=1e-8)
        assert_allclose(area_functional(mirror, m.u), area_functional(mesh, g.u), rtol=1e-10)

    def test_iteration_cap(self, plateau, random_setup):
        _, g0 = random_setup
        with pytest.raises(NoConvergence):
            plateau.solve_maximal(g0, tol=1e-12, max_iter=1)

    def test_timelike_start(self, plateau, circle_mesh):
        u = 2.0 * circle_mesh.vertices[:, 0]
        g0 = GraphSurface(mesh=circle_mesh, u=u, grad_bound=grad_bound(circle_mesh, u))
        with pytest.raises(GradientBlowup):
            plateau.solve_maximal(g0)

    def test_tolerance_must_be_positive(self, plateau, random_setup):
        _, g0 = random_setup
        with pytest.raises(InvalidConfig):
            plateau.solve_maximal(g0, tol=0.0)

    @pytest.mark.slow
    def test_mean_curvature_defect_converges_at_first_order(self, plateau, ruled, random42):
        rs = ruled.build_ruled(random42, (256, 32))
        defects = []
        for h in (0.1, 0.05, 0.025):
            mesh = plateau.build_domain(random42, h)
            g, _ = plateau.solve_maximal(plateau.initial_guess(rs, mesh), tol=1e-10)
            defects.append(mean_curvature_defect(mesh, g.u))
        orders = np.log2(np.array(defects[:-1]) / np.array(defects[1:]))
        # first order, with slack for triangles crossing the core boundary
        assert np.all(orders >= 0.95), orders
