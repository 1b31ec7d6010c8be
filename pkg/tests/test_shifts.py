import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nchydro.constants import DEFAULT_CONSTANTS
from nchydro.dirac import dirac_energy, make_state
from nchydro.errors import DomainError, SingularityError, ValidationError
from nchydro.shifts import (Level, cross_radial_integral_closed,
                            cross_radial_integral_quadrature, level_shift, lz_block,
                            lz_block_numeric, lz_expectation, perturbation_kernels,
                            radial_integral_closed, radial_integral_quadrature,
                            selection_allowed, sigma_cross_block, theta_bound,
                            transition_element_2s2p)

C = DEFAULT_CONSTANTS
ALPHA = C.alpha
M_E = C.m_e
M3A3 = M_E ** 3 * ALPHA ** 3

# published coefficients these computations are compared against
COEFF_2P32_EV3 = 1.578e6
COEFF_2P12_PRINTED_EV3 = 6.57668e6


class TestAngularBlocks:
    def test_2p12_block(self):
        block = lz_block(0.5, 1)
        assert np.allclose(block.matrix, (2.0 / 3.0) * np.diag([-1.0, 1.0]))
        assert block.eigenvalues == pytest.approx([-2.0 / 3.0, 2.0 / 3.0])

    def test_2p32_block(self):
        block = lz_block(1.5, 1)
        diag = np.real(np.diag(block.matrix))
        assert diag == pytest.approx([-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0])

    def test_s_state_block_vanishes(self):
        block = lz_block(0.5, 0)
        assert np.allclose(block.matrix, 0.0)

    @pytest.mark.parametrize("j,l", [(0.5, 0), (0.5, 1), (1.5, 1), (1.5, 2), (2.5, 2)])
    def test_block_invariants(self, j, l):
        block = lz_block(j, l)
        assert block.is_diagonal
        assert np.max(np.abs(block.matrix - block.matrix.conj().T)) < 1e-12
        assert abs(np.trace(block.matrix)) < 1e-12  # full multiplet is traceless

    @pytest.mark.parametrize("j,l", [(0.5, 1), (1.5, 1), (1.5, 2)])
    def test_numeric_matches_closed(self, j, l):
        numeric = lz_block_numeric(j, l)
        closed = lz_block(j, l)
        assert np.max(np.abs(numeric.matrix - closed.matrix)) < 1e-12

    def test_invalid_pair(self):
        with pytest.raises(ValidationError):
            lz_expectation(2.5, 1, 0.5)


class TestSigmaCrossBlocks:
    def test_within_2p12_vanishes(self):
        level = Level.from_label("2P1/2")
        block = sigma_cross_block(level, level)
        assert np.max(np.abs(block.matrix)) < 1e-12

    def test_within_2p32_vanishes(self):
        level = Level.from_label("2P3/2")
        block = sigma_cross_block(level, level)
        assert np.max(np.abs(block.matrix)) < 1e-12

    def test_2s_to_2p12(self):
        block = sigma_cross_block(Level.from_label("2S1/2"), Level.from_label("2P1/2"))
        expected = (2.0 / 3.0) * np.diag([1.0, -1.0])
        assert np.max(np.abs(block.matrix - expected)) < 1e-12

    def test_requires_shared_j(self):
        with pytest.raises(ValidationError):
            sigma_cross_block(Level.from_label("2S1/2"), Level.from_label("2P3/2"))


class TestRadialClosedForms:
    def test_2p32_magnitude(self):
        # closed form evaluates to (m a)^3 / 15 = m^3 alpha^3 / 120 up to O(alpha^2)
        s = make_state(0, -2, 0.5)
        val = radial_integral_closed(s, "sum")
        assert val == pytest.approx(M3A3 / 120.0, rel=1e-4)

    def test_2p32_reproduces_published_coefficient(self):
        s = make_state(0, -2, 0.5)
        coeff = (ALPHA / 2.0) * radial_integral_closed(s, "sum")
        assert coeff == pytest.approx(COEFF_2P32_EV3, rel=0.01)

    def test_mass_scaling(self):
        s1 = make_state(0, -2, 0.5)
        s2 = make_state(0, -2, 0.5, C.with_(m_e=2.0 * M_E))
        ratio = radial_integral_closed(s2, "sum") / radial_integral_closed(s1, "sum")
        assert ratio == pytest.approx(8.0, rel=1e-9)

    def test_diff_over_sum_to_one_at_small_alpha(self):
        weak = C.with_(alpha=5.0e-4)
        s = make_state(0, -2, 0.5, weak)
        ratio = radial_integral_closed(s, "diff") / radial_integral_closed(s, "sum")
        assert abs(ratio - 1.0) < 1e-6

    def test_bad_kind(self):
        s = make_state(0, -2, 0.5)
        with pytest.raises(ValidationError):
            radial_integral_closed(s, "product")


class TestRadialQuadrature:
    def test_2p32_matches_nonrelativistic_moment(self):
        s = make_state(0, -2, 0.5)
        res = radial_integral_quadrature(s, "sum")
        assert res.converged
        assert res.value == pytest.approx(M3A3 / 24.0, rel=1e-3)

    def test_2p12_sampled_value_near_nonrelativistic_moment(self):
        s = make_state(1, 1, 0.5)
        res = radial_integral_quadrature(s, "sum")
        assert not res.converged  # nonintegrable endpoint
        assert res.value == pytest.approx(M3A3 / 24.0, rel=0.05)

    def test_diff_to_sum_ratio_small_alpha(self):
        from nchydro.oracle import radial_ratio_small_alpha
        assert abs(radial_ratio_small_alpha(0, -2, 5.0e-4) - 1.0) < 1e-6

    def test_cross_integral_against_schrodinger_oracle(self):
        # nonrelativistic value: int R20 R21 / r dr = 1/(8 sqrt(3) a0^3)
        res = cross_radial_integral_quadrature()
        expected = M3A3 / (8.0 * math.sqrt(3.0))
        assert abs(res.value) == pytest.approx(expected, rel=5e-3)

    def test_cross_closed_form_uses_shared_energy(self):
        # the degenerate n = 2, |kappa| = 1 energy appears inside the formula
        nu1 = math.sqrt(1.0 - ALPHA ** 2)
        e1 = M_E / math.sqrt(1.0 + (ALPHA / (1.0 + nu1)) ** 2)
        assert e1 == pytest.approx(dirac_energy(1, 1), rel=1e-14)
        assert cross_radial_integral_closed() == pytest.approx(13.0 / 96.0 * M3A3, rel=1e-3)


class TestLevelShift:
    def test_2p32_pattern(self):
        report = level_shift("2P3/2", 1.0e-19)
        mags = sorted(abs(c) for c in report.coefficients)
        assert mags[0] == mags[1]
        assert mags[2] == mags[3]
        assert mags[3] == pytest.approx(COEFF_2P32_EV3, rel=0.01)
        assert mags[3] / mags[0] == pytest.approx(3.0, rel=1e-12)

    def test_symmetric_pairs(self):
        report = level_shift("2P1/2", 2.0e-19)
        assert report.shifts_eV[0] == pytest.approx(-report.shifts_eV[1], rel=1e-14)

    def test_theta_zero_gives_zero_shifts(self):
        report = level_shift("2P3/2", 0.0)
        assert all(s == 0.0 for s in report.shifts_eV)

    def test_s_level_unshifted_by_scalar_channel(self):
        report = level_shift("2S1/2", 1.0e-19)
        assert all(s == 0.0 for s in report.shifts_eV)

    def test_report_is_flagged_and_carries_both_routes(self):
        report = level_shift("2P1/2", 1.0e-19)
        assert report.flagged
        assert report.rho1 != pytest.approx(report.rho1_quadrature, rel=1e-3)
        assert len(report.coefficients_quadrature) == len(report.coefficients)

    @given(st.floats(min_value=1e-24, max_value=1e-18))
    def test_linearity(self, theta):
        r1 = level_shift("2P3/2", theta)
        r2 = level_shift("2P3/2", 2.0 * theta)
        for a, b in zip(r1.shifts_eV, r2.shifts_eV):
            assert b == pytest.approx(2.0 * a, rel=1e-12)

    def test_negative_theta_rejected(self):
        with pytest.raises(ValidationError):
            level_shift("2P3/2", -1.0e-19)


class TestTransitionElement:
    def test_zero_at_zero_theta(self):
        assert transition_element_2s2p(0.0) == 0.0

    def test_closed_form_value(self):
        # (alpha^2/4)(2/3)(13/96) m^3 alpha^3 up to O(alpha^2)
        val = transition_element_2s2p(1.0)
        assert val == pytest.approx((13.0 / 576.0) * M3A3 * ALPHA ** 2, rel=1e-3)

    def test_quadrature_ratio_to_2p12_splitting_is_alpha(self):
        theta = 1.0e-19
        element = transition_element_2s2p(theta, method="quadrature")
        report = level_shift("2P1/2", theta)
        split = max(abs(s) for s in report.coefficients_quadrature) * theta
        assert element / split == pytest.approx(ALPHA, rel=0.2)

    def test_linear_in_theta(self):
        v1 = transition_element_2s2p(3.0e-20)
        v2 = transition_element_2s2p(6.0e-20)
        assert v2 == pytest.approx(2.0 * v1, rel=1e-12)


class TestSelectionRules:
    def test_within_level_allowed(self):
        a = make_state(1, 1, 0.5)
        b = make_state(1, 1, -0.5)
        assert selection_allowed(a, b, "within_level")

    def test_cross_level_2s_2p(self):
        a = make_state(1, -1, 0.5)
        b = make_state(1, 1, 0.5)
        assert selection_allowed(a, b, "cross_level")
        assert not selection_allowed(a, b, "within_level")

    def test_delta_l_two_forbidden(self):
        a = make_state(0, -1, 0.5)   # 1S
        b = make_state(1, 2, 0.5)    # 3D3/2
        assert not selection_allowed(a, b, "within_level")
        assert not selection_allowed(a, b, "cross_level")

    def test_delta_m_two_forbidden(self):
        a = make_state(0, -2, 1.5)
        b = make_state(0, -2, -0.5)
        assert not selection_allowed(a, b, "within_level")


class TestThetaBound:
    def test_published_2p12_coefficient_gives_4gev(self):
        bound = theta_bound(COEFF_2P12_PRINTED_EV3, 80.0)
        assert bound.gev_scale == pytest.approx(4.0, rel=0.15)

    def test_2p32_coefficients(self):
        assert theta_bound(COEFF_2P32_EV3, 80.0).gev_scale == pytest.approx(2.0, rel=0.15)
        assert theta_bound(COEFF_2P32_EV3 / 3.0, 80.0).gev_scale == pytest.approx(1.2, rel=0.15)

    def test_doubling_accuracy_doubles_theta(self):
        b1 = theta_bound(1.0e6, 80.0)
        b2 = theta_bound(1.0e6, 160.0)
        assert b2.theta_max_ev2 == pytest.approx(2.0 * b1.theta_max_ev2, rel=1e-14)

    def test_both_conventions_agree(self):
        b1 = theta_bound(1.0e6, 80.0, convention="two_pi_hbar")
        b2 = theta_bound(1.0e6, 80.0, convention="planck_h")
        assert b1.theta_max_ev2 == pytest.approx(b2.theta_max_ev2, rel=1e-14)

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            theta_bound(-1.0, 80.0)
        with pytest.raises(DomainError):
            theta_bound(1.0e6, 0.0)


class TestPerturbationKernels:
    def test_zero_theta(self):
        s = make_state(1, 1, 0.5)
        t1, t2 = perturbation_kernels(s, 0.0, [1.0, 0.0, 0.0])
        assert t1 == 0.0
        assert np.allclose(t2, 0.0)

    def test_scalar_kernel_value(self):
        s = make_state(1, 1, 0.5)  # <L_z> = (4/3) M = 2/3
        r = 2.0
        t1, _ = perturbation_kernels(s, 1.0e-19, [0.0, 0.0, r])
        assert t1 == pytest.approx(-(ALPHA / (2.0 * r ** 3)) * 1.0e-19 * (2.0 / 3.0), rel=1e-13)

    def test_vector_kernel_orthogonal(self):
        s = make_state(1, 1, 0.5)
        pos = np.array([1.0, 2.0, 3.0])
        _, t2 = perturbation_kernels(s, 1.0e-19, pos)
        assert abs(np.dot(t2, pos)) < 1e-30
        assert abs(t2[2]) == 0.0  # perpendicular to the theta axis

    def test_singular_origin(self):
        s = make_state(1, 1, 0.5)
        with pytest.raises(SingularityError):
            perturbation_kernels(s, 1.0e-19, [0.0, 0.0, 0.0])
