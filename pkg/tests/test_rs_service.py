import math

import numpy as np
import pytest

from pspin.errors import DomainError
from pspin.schemas.model import ModelSpec
from pspin.services import model_service as ms
from pspin.services import rs_service
from pspin.services.lemma_service import compderiv_defect


class TestCriterionFunctions:
    """Test cases for C, D and their pieces."""

    def test_c_vanishes_at_origin(self, rule):
        """C_beta(0) = 0 for every model."""
        assert rs_service.C(ModelSpec(p=3, beta=1.3), 0.0, rule) == 0.0

    def test_d_at_zero_temperature_limit(self, rule):
        """At beta = 0, D(q) = -q."""
        model = ModelSpec(p=3, beta=0.0)
        assert rs_service.D(model, 0.4, rule) == -0.4

    def test_c_is_c1_minus_c2(self, rule):
        """C = C1 - C2 away from the origin."""
        model = ModelSpec(p=4, beta=1.2)
        q = 0.63
        assert rs_service.C(model, q, rule) == pytest.approx(
            rs_service.C1(model, q, rule) - rs_service.C2(model, q), abs=1e-15
        )

    def test_example_one_sign_pattern(self, rule):
        """p = 3, beta = 1.05: D(0.733) > D(0.735) > 0 > D(0.739) > D(0.740)."""
        model = ModelSpec(p=3, beta=1.05)
        d = [rs_service.D(model, q, rule) for q in (0.733, 0.735, 0.739, 0.740)]
        assert d[0] > d[1] > 0.0 > d[2] > d[3]
        assert rs_service.C1(model, 0.739, rule) - rs_service.C2(model, 0.735) < 0.0
        assert rs_service.C(ModelSpec(p=3, beta=1.1), 0.9, rule) > 0.0

    def test_example_two_sign_pattern(self, rule):
        """p = 20, beta = 1.15 near q = 1 through the cancellation-free path."""
        model = ModelSpec(p=20, beta=1.15)
        probes = (0.9999992, 0.9999994, 0.9999997, 0.9999999)
        d = [rs_service.D(model, q, rule) for q in probes]
        assert all(math.isfinite(v) for v in d)
        assert d[0] > d[1] > 0.0 > d[2] > d[3]
        assert rs_service.C1(model, probes[2], rule) - rs_service.C2(model, probes[1]) < 0.0
        assert rs_service.C(ModelSpec(p=20, beta=1.2), 0.99, rule) > 0.0

    def test_vectorised_matches_scalar(self, rule):
        """Array evaluation agrees with pointwise evaluation."""
        model = ModelSpec(p=3, beta=1.05)
        grid = np.array([0.0, 0.2, 0.735, 0.95, 1.0])
        np.testing.assert_allclose(
            rs_service.D(model, grid, rule), [rs_service.D(model, float(q), rule) for q in grid]
        )
        np.testing.assert_allclose(
            rs_service.C(model, grid, rule), [rs_service.C(model, float(q), rule) for q in grid]
        )

    def test_compderiv_identity(self, identity_models, rule):
        """dC/du = (xi''/2) D on 101 interior points for nine models."""
        for model in identity_models:
            assert compderiv_defect(model, rule=rule) <= 1e-6, model

    def test_d_stable_under_order_doubling(self, identity_models, rule, fine_rule):
        """D moves by less than 1e-9 on 101 points when the order goes from 200 to 400."""
        grid = np.linspace(0.0, 1.0, 101)
        for model in identity_models:
            coarse = np.asarray(rs_service.D(model, grid, rule))
            fine = np.asarray(rs_service.D(model, grid, fine_rule))
            assert np.max(np.abs(coarse - fine)) < 1e-9, model

    def test_dc1_dq_matches_finite_difference(self, rule):
        """The closed-form derivative of C1 agrees with a central difference."""
        model = ModelSpec(p=3, beta=1.1)
        q, h = 0.55, 1e-5
        difference = (rs_service.C1(model, q + h, rule) - rs_service.C1(model, q - h, rule)) / (2 * h)
        assert rs_service.dC1_dq(model, q, rule) == pytest.approx(difference, rel=1e-7)
        assert rs_service.dC1_dq(model, q, rule) > 0.0

    def test_dc_dbeta_matches_finite_difference(self, rule):
        """dC/dbeta at fixed q agrees with a central difference in beta."""
        q, beta, h = 0.7, 1.08, 1e-6
        difference = (
            rs_service.C(ModelSpec(p=3, beta=beta + h), q, rule)
            - rs_service.C(ModelSpec(p=3, beta=beta - h), q, rule)
        ) / (2 * h)
        assert rs_service.dC_dbeta(ModelSpec(p=3, beta=beta), q, rule) == pytest.approx(
            difference, abs=1e-7
        )

    def test_c_within_bounds(self, rule):
        """The erf bounds bracket C."""
        model = ModelSpec(p=3, beta=1.2)
        for u in (0.1, 0.5, 0.9, 1.0):
            lower, upper = rs_service.c_bounds(model, u)
            assert lower <= rs_service.C(model, u, rule) <= upper
            assert upper - lower == pytest.approx(math.log(2.0))

    def test_rs_eval_consistency(self, rule):
        """rs_eval bundles the individual functions."""
        model = ModelSpec(p=3, beta=1.05)
        result = rs_service.rs_eval(model, 0.7, rule)
        assert result.C == pytest.approx(result.C1 - result.C2)
        assert result.D == rs_service.D(model, 0.7, rule)
        assert result.dC_du == pytest.approx(0.5 * ms.xi_pp(model, 0.7) * result.D)
        assert rs_service.rs_eval(model, 0.0, rule).T is None


class TestT:
    """Test cases for T and its derivative."""

    def test_t_has_opposite_sign_to_d(self, rule):
        """T = -D / Gamma, so the signs are opposite on (0, 1)."""
        model = ModelSpec(p=3, beta=1.05)
        grid = np.linspace(0.05, 0.95, 181)
        t = rs_service.T(model, grid, rule)
        d = rs_service.D(model, grid, rule)
        assert np.all(np.sign(t) == -np.sign(d))

    def test_t_rejects_small_u(self, rule):
        """T diverges at the origin."""
        with pytest.raises(DomainError):
            rs_service.T(ModelSpec(p=3, beta=1.0), 1e-9, rule)
        with pytest.raises(DomainError):
            rs_service.T(ModelSpec(p=3, beta=0.0), 0.5, rule)

    def test_t_defined_beyond_one(self, rule):
        """T is defined on (0, infinity)."""
        assert math.isfinite(rs_service.T(ModelSpec(p=3, beta=1.0), 3.0, rule))

    @pytest.mark.parametrize("p,beta,u", [(3, 1.0, 0.4), (4, 1.5, 0.7), (10, 0.5, 0.9)])
    def test_t_prime_matches_finite_difference(self, rule, p, beta, u):
        """The closed-form derivative of T agrees with a central difference."""
        model = ModelSpec(p=p, beta=beta)
        h = 1e-6 * u
        difference = (rs_service.T(model, u + h, rule) - rs_service.T(model, u - h, rule)) / (2 * h)
        assert rs_service.T_prime(model, u, rule) == pytest.approx(difference, rel=1e-6)


class TestMoments:
    """Test cases for a_k and its derivative."""

    def test_a_one_and_a_zero(self, rule):
        """a_1 = exp(Y^2/2) and a_0 = 1."""
        assert rs_service.a_k(rule, 1.4, 1) == pytest.approx(math.exp(0.98), rel=1e-12)
        assert rs_service.a_k(rule, 1.4, 0) == pytest.approx(1.0, rel=1e-14)

    def test_a_k_range(self, rule):
        """Only k in -5..1 is provided."""
        with pytest.raises(DomainError):
            rs_service.a_k(rule, 1.0, 2)
        with pytest.raises(DomainError):
            rs_service.da_k_dY(rule, 1.0, -6)

    @pytest.mark.parametrize("k", [-5, -3, -1, 1])
    def test_derivative_recursion(self, rule, k):
        """d a_k / dY = k^2 Y a_k - k (k - 1) Y a_{k-2}."""
        Y, h = 0.9, 1e-6
        difference = (rs_service.a_k(rule, Y + h, k) - rs_service.a_k(rule, Y - h, k)) / (2 * h)
        assert rs_service.da_k_dY(rule, Y, k) == pytest.approx(difference, rel=1e-7)


class TestAuxiliaryFunctions:
    """Test cases for G1 and G2."""

    def test_g1_values(self):
        """G1(0) = 0 and G1 is positive just above 0."""
        assert rs_service.G1(0.0) == 0.0
        assert rs_service.G1(0.01) > 0.0

    def test_g1_domain(self):
        """G1 is undefined at t = 1."""
        with pytest.raises(DomainError):
            rs_service.G1(1.0)

    def test_g1_quotient_increasing(self):
        """The rational part of G1 increases on [0.94, 0.95] and G1 is arctanh minus it."""
        t = np.linspace(0.94, 0.95, 1001)
        quotient = np.asarray(rs_service.G1_quotient(t))
        assert np.all(np.diff(quotient) > 0.0)
        np.testing.assert_allclose(rs_service.G1(t), np.arctanh(t) - quotient, rtol=0.0, atol=1e-15)

    def test_g2_origin_and_small_x(self, rule):
        """G2(0) = 0 and G2(x) behaves like x^3 / 3 near the origin."""
        assert rs_service.G2(0.0, rule) == 0.0
        x = 0.01
        assert rs_service.G2(x, rule) == pytest.approx(x**3 / 3, rel=0.05)

    def test_g2_positive(self, rule):
        """G2 is positive on a grid of (0, 5]."""
        values = rs_service.G2(np.linspace(0.05, 5.0, 100), rule)
        assert np.all(values > 0.0)
