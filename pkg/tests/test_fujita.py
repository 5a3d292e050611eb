"""Cone interpolation: exact integrals, endpoint identities, convexity."""

import math
from fractions import Fraction as F

import pytest
from scipy import integrate

from hvol import DomainError, InvalidCurveError
from hvol.fujita import (
    ConeModel,
    VolumeCurve,
    catalog,
    convexity_check,
    eta,
    f_of_t,
    f_of_t_slope_form,
    negative_eta_cone,
    phi,
    phi_prime_zero,
    phi_samples,
    positive_eta_cone,
    projective_space_cone,
    vol_w_alpha,
)
from hvol.models import SmoothPoint
from hvol.core import normalized_volume


def unit_interval_curve(coeffs, vol0=F(1)):
    return VolumeCurve(breakpoints=(F(0), F(1)), pieces=(tuple(coeffs),), vol_at_zero=vol0)


class TestVolumeCurve:
    def test_value_and_tau(self):
        curve = unit_interval_curve([F(1), F(-1)])
        assert curve.value(F(1, 2)) == F(1, 2)
        assert curve.value(F(2)) == 0
        assert curve.tau == 1

    def test_discontinuity_rejected(self):
        with pytest.raises(InvalidCurveError):
            VolumeCurve(
                breakpoints=(F(0), F(1, 2), F(1)),
                pieces=((F(1),), (F(1, 4), F(-1, 4))),
                vol_at_zero=F(1),
            )

    def test_terminal_jump_rejected(self):
        # the curve must hit 0 at tau: a positive terminal value would put
        # a point mass into the slope measure
        with pytest.raises(InvalidCurveError):
            unit_interval_curve([F(1)])

    def test_increasing_curve_rejected(self):
        with pytest.raises(InvalidCurveError):
            VolumeCurve(
                breakpoints=(F(0), F(1)),
                pieces=((F(1), F(1), F(-2)),),
                vol_at_zero=F(1),
            )

    def test_wrong_vol_at_zero_rejected(self):
        with pytest.raises(InvalidCurveError):
            unit_interval_curve([F(1), F(-1)], vol0=F(2))

    def test_degree_budget(self):
        with pytest.raises(InvalidCurveError):
            ConeModel(base_dim=1, r=F(2), curve=unit_interval_curve([F(1), F(0), F(-1)]))

    def test_two_piece_curve(self):
        curve = VolumeCurve(
            breakpoints=(F(0), F(1, 2), F(1)),
            pieces=((F(1), F(-1)), (F(1), F(-1))),
            vol_at_zero=F(1),
        )
        assert curve.integral() == F(1, 2)


class TestVolWAlpha:
    def test_p1_at_zero(self):
        cone = projective_space_cone(2)
        assert vol_w_alpha(cone, 0) == F(1, 2)

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_blown_up_divisor_volume_is_half(self, n):
        assert vol_w_alpha(projective_space_cone(n), 0) == F(1, 2)

    def test_against_quadrature(self):
        cone = projective_space_cone(3)
        for alpha in (0.0, 0.5, 2.0, 7.5):
            exact = float(vol_w_alpha(cone, F(alpha).limit_denominator(100)))
            numeric, _ = integrate.quad(
                lambda x: (1 - x) ** 2 / (alpha + 1 + x) ** 4, 0, 1, epsabs=1e-14
            )
            assert abs(exact - (1 / (alpha + 1) ** 3 - 3 * numeric)) <= 1e-12

    def test_normalized_interpolation_monotone(self):
        cone = projective_space_cone(2)
        values = [
            float((1 + alpha) ** 2 * vol_w_alpha(cone, alpha))
            for alpha in [F(k, 4) for k in range(0, 40)]
        ]
        assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))
        assert values[0] == 0.5  # the blown-up divisor end
        big = float((1 + 1000) ** 2 * vol_w_alpha(cone, 1000))
        assert abs(big - 1.0) <= 5e-3  # approaches the canonical end L^{n-1}

    def test_negative_alpha_rejected(self):
        with pytest.raises(DomainError):
            vol_w_alpha(projective_space_cone(2), -1)


class TestPhi:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_beta_zero(self, n):
        assert phi(projective_space_cone(n), 0) == n**n

    def test_beta_infinity_p1(self):
        assert phi(projective_space_cone(2), math.inf) == F(9, 2)

    def test_log_discrepancy_factor(self):
        # phi(beta) = (alpha r + r + 1)^n vol(w_alpha) with alpha = 1/beta
        cone = projective_space_cone(3)
        beta = F(1, 4)
        alpha = 4
        expected = (alpha * 3 + 4) ** 3 * vol_w_alpha(cone, F(alpha))
        assert phi(cone, beta) == expected

    def test_cross_check_monomial_valuation(self):
        # the blown-up hyperplane valuation is the (1, ..., 1, 2) monomial
        # valuation on affine n-space
        for n in (2, 3, 4, 5):
            report = normalized_volume(SmoothPoint(n), (F(1),) * (n - 1) + (F(2),))
            assert report.log_discrepancy == n + 1
            assert report.volume == F(1, 2)
            assert phi(projective_space_cone(n), math.inf) == report.normalized_volume


class TestEta:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_projective_space_vanishes(self, n):
        assert eta(projective_space_cone(n)) == 0

    def test_synthetic_signs(self):
        assert eta(positive_eta_cone()) == 1
        assert eta(negative_eta_cone()) == -2

    def test_rescaled_divisor_regression(self):
        # halving tau (doubling the divisor) on the surface cone: the curve
        # 1 - 2x on [0, 1/2] integrates to 1/4, so eta = 2 - 4/4 = 1
        cone = positive_eta_cone()
        assert cone.curve.integral() == F(1, 4)
        assert eta(cone) == F(2) * 1 - F(4) * F(1, 4)


class TestPhiPrimeZero:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_vanishes_on_projective_cones(self, n):
        assert phi_prime_zero(projective_space_cone(n)) == 0

    def test_synthetic_values(self):
        assert phi_prime_zero(positive_eta_cone()) == 2  # n * eta = 2 * 1
        assert phi_prime_zero(negative_eta_cone()) == -4

    def test_finite_difference_agreement(self):
        # the guard inside phi_prime_zero re-derives the derivative by
        # central differences; it must stay silent on every catalog cone
        for cone in catalog().values():
            phi_prime_zero(cone)


class TestInterpolation:
    def test_endpoints(self):
        cone = projective_space_cone(2)
        assert f_of_t(cone, 0) == phi(cone, 0) == 4
        assert f_of_t(cone, 1) == phi(cone, math.inf) == F(9, 2)

    def test_p1_convex_with_flat_start(self):
        cone = projective_space_cone(2)
        assert convexity_check(cone)
        h = F(1, 1000)
        fd = (f_of_t(cone, h) - f_of_t(cone, 0)) / h
        assert abs(float(fd)) <= 1e-2  # f'(0) = n eta r/(r+1) = 0

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_convexity_catalog(self, n):
        assert convexity_check(projective_space_cone(n))

    def test_semistable_implies_endpoint_order(self):
        for cone in catalog().values():
            if eta(cone) >= 0:
                assert float(f_of_t(cone, 1)) >= float(f_of_t(cone, 0)) - 1e-12

    def test_slope_form_matches_exactly(self):
        for cone in catalog().values():
            for t in (F(0), F(1, 7), F(1, 3), F(2, 3), F(9, 10), F(1)):
                assert f_of_t(cone, t) == f_of_t_slope_form(cone, t)

    def test_destabilizing_samples_on_negative_eta(self):
        cone = negative_eta_cone()
        samples = phi_samples(cone, [F(0), F(1, 100), F(1, 10), F(1, 2), F(1), math.inf])
        phi0 = samples[0][1]
        assert phi_prime_zero(cone) < 0
        assert any(value < phi0 for _, value in samples[1:])

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            f_of_t(projective_space_cone(2), F(3, 2))
