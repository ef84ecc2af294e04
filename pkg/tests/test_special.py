import math

import pytest
from hypothesis import given, strategies as st

from fracgrow.errors import NonConvergenceError, PoleError, ValidationError
from fracgrow.special import MLParams, gamma, mittag_leffler, mittag_leffler2


class TestGamma:
    def test_gamma_one(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_gamma_half_is_sqrt_pi(self):
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-12)

    def test_gamma_five(self):
        assert gamma(5.0) == pytest.approx(24.0, rel=1e-13)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.7, 3.2, 10.0, 19.5, 29.9])
    def test_matches_stdlib(self, x):
        assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-12)

    @given(st.floats(min_value=0.1, max_value=20.0))
    def test_recurrence(self, x):
        assert gamma(x + 1.0) / (x * gamma(x)) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -7.0])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma(x)

    def test_negative_non_integer(self):
        assert gamma(-0.5) == pytest.approx(math.gamma(-0.5), rel=1e-12)


class TestMittagLeffler:
    def test_alpha_one_is_exp(self):
        assert mittag_leffler(MLParams(alpha=1.0), 1.0) == pytest.approx(math.e, rel=1e-13)

    def test_z_zero(self):
        assert mittag_leffler(MLParams(alpha=1.0), 0.0) == 1.0

    def test_alpha_two_cosh_identity(self):
        # E_2(z^2) = cosh(z)
        assert mittag_leffler(MLParams(alpha=2.0), 1.0) == pytest.approx(
            math.cosh(1.0), rel=1e-13
        )

    @given(st.floats(min_value=-5.0, max_value=5.0))
    def test_exp_identity_range(self, z):
        value = mittag_leffler(MLParams(alpha=1.0), z)
        assert abs(value - math.exp(z)) <= 1e-12 * math.exp(z)

    def test_requires_beta_one(self):
        with pytest.raises(ValidationError):
            mittag_leffler(MLParams(alpha=1.0, beta=2.0), 1.0)

    def test_cap_raises(self):
        with pytest.raises(NonConvergenceError):
            mittag_leffler(MLParams(alpha=1.0), 40.0, max_terms=10)

    def test_finite_within_budget(self):
        for z in (-50.0, -10.0, 10.0, 50.0):
            assert math.isfinite(mittag_leffler(MLParams(alpha=1.0), z))


class TestMittagLeffler2:
    def test_reduces_to_one_parameter(self):
        for z in (-3.0, -1.0, 0.0, 0.5, 2.0, 5.0):
            assert mittag_leffler2(MLParams(alpha=1.0, beta=1.0), z) == mittag_leffler(
                MLParams(alpha=1.0), z
            )

    def test_exp_reduction(self):
        assert mittag_leffler2(MLParams(alpha=1.0, beta=1.0), 2.0) == pytest.approx(
            math.exp(2.0), rel=1e-13
        )

    def test_expm1_identity(self):
        # E_{1,2}(z) = (e^z - 1) / z
        assert mittag_leffler2(MLParams(alpha=1.0, beta=2.0), 1.0) == pytest.approx(
            math.expm1(1.0), rel=1e-13
        )

    def test_z_zero_uses_gamma_beta(self):
        assert mittag_leffler2(MLParams(alpha=1.0, beta=2.0), 0.0) == pytest.approx(
            1.0, rel=1e-14
        )

    def test_param_validation(self):
        with pytest.raises(ValidationError):
            MLParams(alpha=0.0)
        with pytest.raises(ValidationError):
            MLParams(alpha=1.0, beta=-1.0)
