import math

import numpy as np
import pytest

from pspin.errors import DomainError, QuadratureError
from pspin.services.quadrature_service import (composite_normal, cosh_pow_ratio,
                                               cosh_ratio, expect, expect2d,
                                               expect_cosh_pow, expect_cosh_weighted,
                                               gauss_hermite, log_expect_cosh_pow,
                                               logcosh, resolve_rule, rule_for_scale,
                                               sech2, tilted_mean)


class TestGaussHermite:
    """Test cases for the Gauss-Hermite rule."""

    def test_weights_sum_to_one(self, rule):
        """Probabilists' weights form a probability vector."""
        assert rule.order == 200
        assert float(np.sum(rule.weights)) == pytest.approx(1.0, abs=1e-12)
        assert np.all(rule.weights >= 0.0)

    def test_nodes_symmetric(self, rule):
        """Nodes are symmetric about zero."""
        np.testing.assert_array_equal(rule.nodes, -rule.nodes[::-1])

    @pytest.mark.parametrize("k,moment", [(2, 1.0), (4, 3.0), (6, 15.0), (8, 105.0)])
    def test_gaussian_moments(self, rule, k, moment):
        """Even moments of N(0, 1) are reproduced."""
        assert expect(rule, lambda g: g**k) == pytest.approx(moment, rel=1e-10)

    def test_rule_is_read_only(self, rule):
        """Node and weight arrays cannot be modified."""
        with pytest.raises(ValueError):
            rule.nodes[0] = 0.0

    def test_order_bounds(self):
        """Orders below 4 or non-integers are rejected."""
        with pytest.raises(DomainError):
            gauss_hermite(3)
        with pytest.raises(DomainError):
            gauss_hermite(10.0)

    def test_resolve_rule_default(self):
        """Without an explicit rule the configured order is used."""
        assert resolve_rule().order == 200


class TestCoshWeighted:
    """Test cases for tilt-cancelled and cosh^m-weighted expectations."""

    def test_expect_cosh_weighted_closed_form(self, rule):
        """E[cosh(Yg)] = exp(Y^2 / 2)."""
        Y = 1.3
        assert expect_cosh_weighted(rule, Y, np.ones_like) == pytest.approx(
            math.exp(Y**2 / 2), rel=1e-12
        )

    def test_tilted_mean_matches_direct_ratio(self, rule):
        """The tilt gives the same ratio as direct quadrature for moderate Y."""
        Y = 1.0
        numerator = expect(rule, lambda g: np.cosh(Y * g) * np.tanh(Y * g) ** 2)
        denominator = expect(rule, lambda g: np.cosh(Y * g))
        assert tilted_mean(rule, Y, lambda x: np.tanh(x) ** 2) == pytest.approx(
            numerator / denominator, rel=1e-12
        )

    def test_tilted_mean_with_shift(self, rule):
        """E[cosh(s + Yg)] = cosh(s) exp(Y^2/2), so the mean of tanh is finite and odd in s."""
        plus = tilted_mean(rule, 0.8, np.tanh, shift=0.5)
        minus = tilted_mean(rule, 0.8, np.tanh, shift=-0.5)
        assert plus == pytest.approx(-minus, abs=1e-14)
        assert 0.0 < plus < 1.0

    def test_tilted_mean_broadcasts(self, rule):
        """Array scales give an array of ratios."""
        values = tilted_mean(rule, np.array([0.0, 0.5, 2.0]), lambda x: np.tanh(x) ** 2)
        assert values.shape == (3,)
        assert values[0] == 0.0
        assert np.all(np.diff(values) > 0.0)

    def test_tilted_mean_large_scale_no_overflow(self, rule):
        """Y = 6 leaves the ratio finite and small."""
        value = tilted_mean(rule, 6.0, sech2)
        assert 0.0 <= value < 1e-6

    def test_cosh_ratio(self, rule):
        """A ratio with a denominator integrand is the quotient of tilted means."""
        value = cosh_ratio(rule, 1.2, lambda x: np.tanh(x) ** 2, np.ones_like)
        assert value == pytest.approx(tilted_mean(rule, 1.2, lambda x: np.tanh(x) ** 2))

    def test_log_expect_cosh_pow_at_one(self, rule):
        """log E[cosh(Yg)] = Y^2 / 2."""
        assert log_expect_cosh_pow(rule, 1.7, 1.0) == pytest.approx(1.7**2 / 2, rel=1e-12)

    def test_cosh_pow_ratio_at_one_matches_tilt(self, rule):
        """For m = 1 the softmax mean equals the tilted mean."""
        assert cosh_pow_ratio(rule, 1.1, 1.0, np.square) == pytest.approx(
            tilted_mean(rule, 1.1, np.square), rel=1e-11
        )

    def test_expect_cosh_pow_rejects_bad_m(self, rule):
        """m must lie in (0, 1]."""
        with pytest.raises(DomainError):
            expect_cosh_pow(rule, 1.0, 0.0, np.ones_like)
        with pytest.raises(DomainError):
            expect_cosh_pow(rule, 1.0, 1.5, np.ones_like)

    def test_expect_cosh_pow_value(self, rule):
        """E[cosh^m(Yg)] for m = 1 is exp(Y^2 / 2)."""
        assert expect_cosh_pow(rule, 0.9, 1.0, np.ones_like) == pytest.approx(math.exp(0.405), rel=1e-12)

    def test_negative_scale_rejected(self, rule):
        """The Gaussian scale must be non-negative."""
        with pytest.raises(DomainError):
            tilted_mean(rule, -1.0, np.tanh)


class TestCompositeRule:
    """Test cases for the composite rule used at large scales."""

    def test_normal_moments(self):
        """Weights sum to one and even moments of N(0, 1) are reproduced."""
        composite = composite_normal(16)
        assert composite.order == composite.nodes.size
        assert float(np.sum(composite.weights)) == pytest.approx(1.0, abs=1e-12)
        assert expect(composite, np.square) == pytest.approx(1.0, rel=1e-12)
        assert expect(composite, lambda g: g**4) == pytest.approx(3.0, rel=1e-12)

    def test_cached(self):
        """Rules are built once per scale bucket."""
        assert composite_normal(12) is composite_normal(12)

    def test_rule_for_scale(self, rule):
        """The given rule serves up to Y = 2; larger scales get a finer composite rule."""
        assert rule_for_scale(rule, 1.5) is rule
        assert rule_for_scale(rule, 2.0) is rule
        assert rule_for_scale(rule, 3.1) is composite_normal(13)
        assert rule_for_scale(rule, 3.1).order > rule.order

    def test_bad_bucket(self):
        """Buckets are positive integers."""
        with pytest.raises(DomainError):
            composite_normal(0)

    @pytest.mark.parametrize("Y", [3.0, 4.0, 6.0])
    def test_tilted_mean_resolves_large_scale(self, rule, Y):
        """sech^2 under the tilt matches a 2000-point Gauss-Hermite reference."""
        reference_rule = gauss_hermite(2000)
        reference = 0.5 * (
            expect(reference_rule, lambda g: sech2(Y**2 + Y * g))
            + expect(reference_rule, lambda g: sech2(-(Y**2) + Y * g))
        )
        assert tilted_mean(rule, Y, sech2) == pytest.approx(reference, abs=1e-12)

    def test_log_expect_cosh_pow_large_scale(self, rule):
        """log E[cosh(5 g)] = 12.5 on the composite rule."""
        assert log_expect_cosh_pow(rule, 5.0, 1.0) == pytest.approx(12.5, rel=1e-12)

    def test_mixed_scales_match_scalar(self, rule):
        """Each element of a mixed array equals its scalar evaluation."""
        scales = np.array([0.5, 1.9, 2.6, 4.2, 6.0])
        values = tilted_mean(rule, scales, logcosh)
        powers = cosh_pow_ratio(rule, scales, 0.4, np.tanh, shift=0.3)
        for Y, value, power in zip(scales, values, powers):
            assert value == pytest.approx(tilted_mean(rule, float(Y), logcosh), rel=1e-13)
            assert power == pytest.approx(cosh_pow_ratio(rule, float(Y), 0.4, np.tanh, shift=0.3), rel=1e-13)


class TestQuadratureErrors:
    """Test cases for non-finite integrands and overflow."""

    def test_non_finite_integrand_names_node(self, rule):
        """A NaN on a node raises and reports the node."""
        with pytest.raises(QuadratureError, match="g="):
            expect(rule, lambda g: np.where(g > 3.0, np.nan, g))

    def test_uncancelled_overflow(self, rule):
        """E[cosh(40 g)] is beyond double range."""
        with pytest.raises(QuadratureError):
            expect_cosh_weighted(rule, 40.0, np.ones_like)

    def test_logcosh_large_argument(self):
        """log cosh stays finite far beyond cosh's range."""
        assert logcosh(np.array(1000.0)) == pytest.approx(1000.0 - math.log(2.0))
        assert sech2(np.array(1000.0)) == 0.0


class TestExpect2d:
    """Test cases for the tensor-product rule."""

    def test_independent_moments(self, rule):
        """E[g1^2 g2^2] = 1 and E[g1 g2] = 0."""
        assert expect2d(rule, lambda a, b: a**2 * b**2) == pytest.approx(1.0, rel=1e-10)
        assert expect2d(rule, lambda a, b: a * b) == pytest.approx(0.0, abs=1e-14)

    def test_error_names_node_pair(self, rule):
        """A non-finite value reports both coordinates."""
        with pytest.raises(QuadratureError, match="node pair"):
            expect2d(rule, lambda a, b: np.where((a > 3.0) & (b > 3.0), np.inf, 0.0))

    @pytest.mark.slow
    def test_monte_carlo_cosh_ratio(self, rule, mc_normals):
        """A cosh-weighted ratio agrees with a fixed-seed Monte Carlo estimate."""
        Y = 1.2
        x = Y * mc_normals
        weights = np.cosh(x)
        values = np.tanh(x) ** 2
        estimate = np.sum(weights * values) / np.sum(weights)
        residual = weights * (values - estimate)
        stderr = np.std(residual) / (np.mean(weights) * math.sqrt(len(x)))
        assert abs(tilted_mean(rule, Y, lambda z: np.tanh(z) ** 2) - estimate) < 3 * stderr
