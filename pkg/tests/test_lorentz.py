import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from minkcurve.core import lorentz
from minkcurve.core.lorentz import CausalTag, MinkVec3, TimeOrientation

coords = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
vectors = st.tuples(coords, coords, coords).map(np.array)


# =============================================================================
# Inner and cross products
# =============================================================================
class TestProducts:
    def test_inner_basis(self):
        assert lorentz.inner([1, 0, 0], [1, 0, 0]) == 1.0
        assert lorentz.inner([0, 0, 1], [0, 0, 1]) == -1.0
        assert lorentz.inner([1, 1, 1], [1, -1, 0]) == 0.0

    def test_cross_values(self):
        assert_array_equal(lorentz.cross([1, 0, 0], [0, 1, 0]), [0, 0, 1])
        assert_array_equal(lorentz.cross([0, 1, 0], [0, 0, 1]), [-1, 0, 0])
        assert_array_equal(lorentz.cross([1, 2, 3], [1, 2, 3]), [0, 0, 0])

    def test_broadcasts_over_leading_axes(self):
        X = np.arange(24, dtype=float).reshape(2, 4, 3)
        out = lorentz.inner(X, X)
        assert out.shape == (2, 4)
        assert out[1, 2] == lorentz.inner(X[1, 2], X[1, 2])

    @given(vectors, vectors)
    def test_cross_is_orthogonal(self, X, Y):
        Z = lorentz.cross(X, Y)
        nx, ny = np.linalg.norm(X), np.linalg.norm(Y)
        tol = 1e-9 * (1.0 + nx * nx * ny + nx * ny * ny)
        assert abs(lorentz.inner(Z, X)) <= tol
        assert abs(lorentz.inner(Z, Y)) <= tol

    @given(vectors, vectors)
    def test_cross_is_antisymmetric(self, X, Y):
        assert_allclose(lorentz.cross(X, Y), -lorentz.cross(Y, X), atol=1e-12)

    @given(vectors, vectors)
    def test_cross_norm_identity(self, X, Y):
        """<X x Y, X x Y> = <X, Y>^2 - <X, X><Y, Y>."""
        Z = lorentz.cross(X, Y)
        lhs = lorentz.inner(Z, Z)
        rhs = lorentz.inner(X, Y) ** 2 - lorentz.inner(X, X) * lorentz.inner(Y, Y)
        scale = 1.0 + np.sum(X * X) * np.sum(Y * Y)
        assert abs(lhs - rhs) <= 1e-9 * scale


# =============================================================================
# Causal classification
# =============================================================================
class TestClassify:
    @pytest.mark.parametrize("vector, tag, orientation", [
        ([0, 0, 1], CausalTag.TIMELIKE, TimeOrientation.FUTURE),
        ([0, 0, -2], CausalTag.TIMELIKE, TimeOrientation.PAST),
        ([1, 0, 1], CausalTag.LIGHTLIKE, TimeOrientation.FUTURE),
        ([1, 0, 0], CausalTag.SPACELIKE, None),
        ([0, 0, 0], CausalTag.LIGHTLIKE, None),
    ])
    def test_examples(self, vector, tag, orientation):
        cls = lorentz.classify(vector)
        assert cls.tag == tag
        assert cls.time_orientation == orientation

    def test_tolerance_scales_with_size(self):
        # <X,X> = 1e-8 is below 1e-12 * |X|^2 for |X| ~ 1e3
        X = np.array([1e3, 0.0, np.sqrt(1e6 - 1e-8)])
        assert lorentz.classify(X).tag == CausalTag.LIGHTLIKE

    def test_negative_tolerance_rejected(self):
        with pytest.raises(ValueError):
            lorentz.classify([1, 0, 0], zero_tol=-1.0)

    @given(vectors)
    def test_normalized_form_is_bounded(self, X):
        value = float(lorentz.normalized_form(X))
        assert -1.0 - 1e-12 <= value <= 1.0 + 1e-12


# =============================================================================
# Units and angles
# =============================================================================
class TestUnits:
    def test_unit_keeps_causal_sign(self):
        assert_allclose(lorentz.inner(*(2 * [lorentz.unit([0.0, 0.0, 3.0])])), -1.0)
        assert_allclose(lorentz.inner(*(2 * [lorentz.unit([3.0, 4.0, 0.0])])), 1.0)

    def test_future_flips_past_vectors(self):
        assert_array_equal(lorentz.future([[1.0, 0.0, -2.0], [0.0, 1.0, 2.0]]), [[-1.0, 0.0, 2.0], [0.0, 1.0, 2.0]])

    @given(st.floats(min_value=0.0, max_value=3.0))
    @settings(max_examples=25)
    def test_hyperbolic_angle_of_boost(self, r):
        n2 = [np.sinh(r), 0.0, np.cosh(r)]
        assert_allclose(lorentz.hyperbolic_angle([0.0, 0.0, 1.0], n2), r, atol=1e-7)

    def test_minkvec_rejects_non_finite(self):
        with pytest.raises(ValueError):
            MinkVec3(0.0, np.inf, 0.0)

    def test_minkvec_is_array_like(self):
        v = MinkVec3(1.0, 2.0, 3.0)
        assert lorentz.inner(v, v) == 1.0 + 4.0 - 9.0
        assert MinkVec3.from_array(np.asarray(v)) == v
