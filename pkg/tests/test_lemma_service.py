import numpy as np
import pytest
from numpy.testing import assert_allclose

from minkcurve.core import lorentz
from minkcurve.core.errors import DegeneratePlane, InvalidConfig
from minkcurve.models.plane_models import PlaneKind, ProjectionPlane
from minkcurve.services.lemma_service import (
    LemmaService, is_simple_polygon, random_lightlike_planes, random_spacelike_planes,
)


@pytest.fixture(scope="module")
def lemmas():
    return LemmaService(run_id="test")


# =============================================================================
# Planes
# =============================================================================
class TestPlanes:
    def test_spacelike_projection_kills_x3(self):
        plane = ProjectionPlane.spacelike([0.0, 0.0, 1.0])
        assert_allclose(plane.project([3.0, 4.0, 7.0]), [3.0, 4.0, 0.0])

    def test_lightlike_projection(self):
        plane = ProjectionPlane.lightlike([0.0, 1.0, 1.0], [0.0, 0.5, -0.5])
        assert_allclose(plane.project([1.0, 0.0, 0.0]), [1.0, 0.0, 0.0])
        assert_allclose(plane.project([0.0, 1.0, 0.0]), [0.0, 0.5, 0.5])

    def test_default_transversal(self):
        plane = ProjectionPlane.lightlike([1.0, 0.0, 1.0])
        assert_allclose(plane.n_star, [0.5, 0.0, -0.5])
        assert_allclose(lorentz.inner(plane.normal, plane.n_star), 1.0)

    def test_spacelike_normal_is_normalized(self):
        plane = ProjectionPlane.spacelike([0.0, 0.0, -2.0])
        assert_allclose(plane.normal, [0.0, 0.0, 1.0])

    @pytest.mark.parametrize("normal", [[1.0, 0.0, 0.0], [1.0, 0.0, 1.0]])
    def test_spacelike_plane_rejects_non_timelike(self, normal):
        with pytest.raises(DegeneratePlane):
            ProjectionPlane.spacelike(normal)

    @pytest.mark.parametrize("normal", [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    def test_lightlike_plane_rejects_non_null(self, normal):
        with pytest.raises(DegeneratePlane):
            ProjectionPlane.lightlike(normal)

    def test_bad_transversal(self):
        with pytest.raises(DegeneratePlane):
            ProjectionPlane.lightlike([0.0, 1.0, 1.0], [0.0, 1.0, -1.0])

    def test_projections_land_in_the_plane(self):
        rng = np.random.default_rng(3)
        v = rng.normal(size=(50, 3))
        for plane in random_spacelike_planes(5, rng) + random_lightlike_planes(5, rng):
            assert_allclose(lorentz.inner(plane.project(v), plane.normal), 0.0, atol=1e-9)

    def test_projection_is_idempotent(self):
        rng = np.random.default_rng(5)
        v = rng.normal(size=(50, 3))
        for plane in random_spacelike_planes(5, rng) + random_lightlike_planes(5, rng):
            once = plane.project(v)
            assert_allclose(plane.project(once), once, atol=1e-10)

    def test_spacelike_basis_is_orthonormal(self):
        for plane in random_spacelike_planes(5, np.random.default_rng(4)):
            e1, e2 = plane.basis()
            assert_allclose([lorentz.inner(e1, e1), lorentz.inner(e2, e2), lorentz.inner(e1, e2)], [1, 1, 0], atol=1e-9)
            assert plane.kind == PlaneKind.SPACELIKE


# =============================================================================
# Polygons
# =============================================================================
class TestPolygons:
    def test_square(self):
        assert is_simple_polygon(np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float))

    def test_clockwise_square(self):
        assert is_simple_polygon(np.array([[0, 0], [0, 1], [1, 1], [1, 0]], dtype=float))

    def test_bowtie(self):
        assert not is_simple_polygon(np.array([[0, 0], [1, 1], [1, 0], [0, 1]], dtype=float))

    def test_pentagram_turns_one_way_but_winds_twice(self):
        k = np.arange(5) * 2
        star = np.column_stack([np.cos(2 * np.pi * k / 5), np.sin(2 * np.pi * k / 5)])
        assert not is_simple_polygon(star)

    def test_concave_polygon(self):
        L_shape = np.array([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]], dtype=float)
        assert is_simple_polygon(L_shape)


# =============================================================================
# Projection check
# =============================================================================
class TestProjectionLemma:
    def test_circle_on_horizontal_plane(self, lemmas, circle):
        report = lemmas.check_projection_lemma(circle, ProjectionPlane.spacelike([0.0, 0.0, 1.0]))
        assert report.convex and report.injective
        assert report.plane_kind == "Spacelike"

    def test_wavy_on_lightlike_plane(self, lemmas, wavy_curve):
        report = lemmas.check_projection_lemma(wavy_curve, ProjectionPlane.lightlike([0.0, 1.0, 1.0]))
        assert report.convex
        assert report.injective

    def test_limacon_is_not_convex(self, lemmas, limacon):
        report = lemmas.check_projection_lemma(limacon, ProjectionPlane.spacelike([0.0, 0.0, 1.0]))
        assert not report.convex
        assert report.injective

    @pytest.mark.parametrize("fixture", ["tilted_ellipse", "random42", "wavy_curve"])
    def test_random_planes(self, lemmas, request, fixture):
        c = request.getfixturevalue(fixture)
        reports = lemmas.check_projection_planes(c, count=10, seed=11)
        assert len(reports) == 21
        assert all(r.convex and r.injective for r in reports)


# =============================================================================
# Section check
# =============================================================================
class TestSectionLemma:
    def test_circle(self, lemmas, circle):
        report = lemmas.check_section_lemma(circle, trials=1000, seed=0)
        assert report.chords_ok and report.triples_ok and report.chord_tangent_ok
        assert report.pairs_checked == 256 * 255 // 2
        assert report.triples_checked == 1000
        # every chord, triple normal and chord-tangent normal of a horizontal circle is axis-aligned
        assert_allclose(report.worst_margin, 1.0, rtol=1e-12)
        d = circle.points[128] - circle.points[0]
        assert_allclose(lorentz.inner(d, d), 4.0, rtol=1e-10)
        assert_allclose(lorentz.normalized_form(d), 1.0, rtol=1e-12)

    @pytest.mark.parametrize("fixture", ["tilted_ellipse", "random42"])
    def test_hypothesis_curves(self, lemmas, request, fixture):
        report = lemmas.check_section_lemma(request.getfixturevalue(fixture), trials=5000, seed=3)
        assert report.chords_ok and report.triples_ok and report.chord_tangent_ok
        assert report.worst_margin > 0

    def test_steep_helix_fails(self, lemmas):
        t = np.linspace(0.0, 2 * np.pi, 16, endpoint=False)
        points = np.stack([np.cos(t), np.sin(t), 2.0 * np.sin(t)], axis=-1)
        tangents = np.stack([-np.sin(t), np.cos(t), 2.0 * np.cos(t)], axis=-1)
        report = lemmas.check_section_points(points, tangents, trials=100)
        assert not report.chords_ok
        assert report.worst_margin < 0

    def test_trials_must_be_positive(self, lemmas, circle):
        with pytest.raises(InvalidConfig):
            lemmas.check_section_lemma(circle, trials=0)

    def test_triples_are_reproducible(self, lemmas, random42):
        a = lemmas.check_section_lemma(random42, trials=9000, seed=5, exhaustive=False)
        b = lemmas.check_section_lemma(random42, trials=9000, seed=5, exhaustive=False)
        assert a.worst_margin == b.worst_margin
        assert a.pairs_checked == 9000
