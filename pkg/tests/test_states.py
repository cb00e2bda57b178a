"""Gaussian state, overlap, derivative, and covariance tests.

Nontrivial expected values are frozen from independent grid quadrature of
the amplitudes (see the quadrature helpers below), not from any closed-form
information expression.
"""

import math

import numpy as np
import pytest

from qfi_radar.analytic import qfi_entangled
from qfi_radar.kinematics import ParameterPair
from qfi_radar.oracle import grid_crosscheck
from qfi_radar.states import (
    GaussianBiphoton,
    GaussianSinglePhoton,
    biphoton_amplitude,
    derivative,
    derivative_own,
    derivative_single,
    frequency_covariance,
    overlap,
    overlap_biphoton,
    overlap_single,
    single_amplitude,
    time_covariance,
)

PAIR_A = ParameterPair.TIME_SUM_FREQ_DIFF


def quad_overlap_1d(a, b, points=4001, half_width=12.0):
    """Independent quadrature of <a|b> for single-photon states."""
    width = half_width / min(a.sigma, b.sigma)
    center = (a.t_bar + b.t_bar) / 2.0
    t = np.linspace(center - width, center + width, points)
    return np.trapezoid(np.conj(single_amplitude(a, t)) * single_amplitude(b, t), t)


def quad_overlap_2d(a, b, points=701, half_width=9.0):
    """Independent quadrature of <a|b> for biphoton states."""
    spread = 1.0 / math.sqrt(1.0 - max(abs(a.kappa), abs(b.kappa)))
    w1 = half_width * spread / min(a.sigma1, b.sigma1)
    w2 = half_width * spread / min(a.sigma2, b.sigma2)
    c1 = (a.t1_bar + b.t1_bar) / 2.0
    c2 = (a.t2_bar + b.t2_bar) / 2.0
    t1 = np.linspace(c1 - w1, c1 + w1, points)
    t2 = np.linspace(c2 - w2, c2 + w2, points)
    T1, T2 = np.meshgrid(t1, t2, indexing="ij")
    integrand = np.conj(biphoton_amplitude(a, T1, T2)) * biphoton_amplitude(b, T1, T2)
    return np.trapezoid(np.trapezoid(integrand, t2, axis=1), t1)


class TestNormalization:
    def test_single_peak_amplitude(self):
        psi = GaussianSinglePhoton(0.0, 1.0, 1.0)
        assert abs(single_amplitude(psi, 0.0)) == pytest.approx((2.0 / math.pi) ** 0.25)

    def test_single_phase_at_center(self):
        psi = GaussianSinglePhoton(0.5, 3.0, 1.0)
        assert np.angle(single_amplitude(psi, 0.5)) == pytest.approx(0.0, abs=1e-15)

    def test_single_quadrature_norm(self):
        report = grid_crosscheck(GaussianSinglePhoton(0.3, 2.0, 1.5))
        assert report["norm_error"] <= 1e-8

    def test_biphoton_quadrature_norm(self):
        report = grid_crosscheck(GaussianBiphoton(0.0, 1.0, 2.0, 3.0, 1.0, 2.0, -0.5))
        assert report["norm_error"] <= 1e-8

    def test_biphoton_high_correlation_norm(self):
        report = grid_crosscheck(GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.9))
        assert report["norm_error"] <= 1e-6

    def test_validation(self):
        with pytest.raises(ValueError):
            GaussianSinglePhoton(0.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)


class TestOverlapSingle:
    def test_self_overlap(self):
        psi = GaussianSinglePhoton(0.7, 2.0, 1.3)
        assert overlap_single(psi, psi) == pytest.approx(1.0, abs=1e-12)

    def test_carrier_shift(self):
        # equal sigma = 1, carrier separation 2: modulus e^{-0.5}
        a = GaussianSinglePhoton(0.0, 1.0, 1.0)
        b = GaussianSinglePhoton(0.0, 3.0, 1.0)
        assert abs(overlap_single(a, b)) == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_bandwidth_mismatch_prefactor(self):
        a = GaussianSinglePhoton(0.0, 1.0, 1.0)
        b = GaussianSinglePhoton(0.0, 1.0, 3.0)
        assert abs(overlap_single(a, b)) == pytest.approx(math.sqrt(0.6), abs=1e-12)

    def test_time_shift(self):
        a = GaussianSinglePhoton(0.0, 1.0, 1.0)
        b = GaussianSinglePhoton(1.0, 1.0, 1.0)
        assert abs(overlap_single(a, b)) == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_general_vs_quadrature(self):
        a = GaussianSinglePhoton(0.2, 1.5, 0.8)
        b = GaussianSinglePhoton(-0.4, 2.5, 1.4)
        assert overlap_single(a, b) == pytest.approx(quad_overlap_1d(a, b), abs=1e-9)


class TestOverlapBiphoton:
    def test_self_overlap(self):
        phi = GaussianBiphoton(0.1, 0.2, 1.0, 2.0, 1.0, 2.0, 0.4)
        assert overlap_biphoton(phi, phi) == pytest.approx(1.0, abs=1e-12)

    def test_separable_factorizes(self):
        a = GaussianBiphoton(0.0, 0.0, 1.0, 2.0, 1.0, 1.5, 0.0)
        b = GaussianBiphoton(0.5, -0.3, 1.5, 2.5, 1.0, 1.5, 0.0)
        lhs = overlap_biphoton(a, b)
        rhs = overlap_single(
            GaussianSinglePhoton(0.0, 1.0, 1.0), GaussianSinglePhoton(0.5, 1.5, 1.0)
        ) * overlap_single(
            GaussianSinglePhoton(0.0, 2.0, 1.5), GaussianSinglePhoton(-0.3, 2.5, 1.5)
        )
        assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_single_coordinate_shift_is_correlation_independent(self):
        # shifting one photon's center by 1 at sigma = 1 decays as e^{-1/2}
        # regardless of kappa: the marginal width along one coordinate is
        # set by that coordinate's own bandwidth.  Frozen by quadrature.
        for kappa in (0.0, 0.5, -0.7):
            a = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, kappa)
            b = GaussianBiphoton(1.0, 0.0, 1.0, 1.0, 1.0, 1.0, kappa)
            got = abs(overlap_biphoton(a, b))
            assert got == pytest.approx(math.exp(-0.5), abs=1e-12), f"kappa={kappa}"
            assert got == pytest.approx(abs(quad_overlap_2d(a, b)), abs=1e-8)

    def test_general_vs_quadrature(self):
        a = GaussianBiphoton(0.0, 0.3, 1.0, 2.0, 1.0, 1.5, 0.5)
        b = GaussianBiphoton(0.4, -0.2, 1.5, 2.2, 1.2, 1.3, 0.3)
        assert overlap_biphoton(a, b) == pytest.approx(quad_overlap_2d(a, b), abs=1e-8)


class TestDerivatives:
    @pytest.mark.parametrize("param", ["t_plus", "t_minus", "omega_plus", "omega_minus"])
    def test_biphoton_derivative_vs_finite_difference(self, param):
        # <phi | d phi / d lambda> compared with central differences of the
        # exact overlap under a sum/difference parameter shift
        phi = GaussianBiphoton(0.1, 0.4, 1.0, 2.0, 1.0, 1.5, 0.5)
        d = derivative(phi, param)
        h = 1e-6
        sign_t = {"t_plus": (0.5, 0.5), "t_minus": (-0.5, 0.5)}
        sign_w = {"omega_plus": (0.5, 0.5), "omega_minus": (-0.5, 0.5)}

        def shifted(eps):
            kw = {
                "t1_bar": phi.t1_bar,
                "t2_bar": phi.t2_bar,
                "omega1_bar": phi.omega1_bar,
                "omega2_bar": phi.omega2_bar,
            }
            if param in sign_t:
                kw["t1_bar"] += sign_t[param][0] * eps
                kw["t2_bar"] += sign_t[param][1] * eps
            else:
                kw["omega1_bar"] += sign_w[param][0] * eps
                kw["omega2_bar"] += sign_w[param][1] * eps
            return GaussianBiphoton(sigma1=1.0, sigma2=1.5, kappa=0.5, **kw)

        got = overlap(phi, d)
        fd = (overlap(phi, shifted(h)) - overlap(phi, shifted(-h))) / (2.0 * h)
        assert got == pytest.approx(fd, abs=1e-8)

    @pytest.mark.parametrize("var", ["t_bar", "omega_bar", "sigma"])
    def test_single_own_derivative_vs_finite_difference(self, var):
        psi = GaussianSinglePhoton(0.2, 1.5, 1.1)
        d = derivative_own(psi, var)
        h = 1e-6

        def shifted(eps):
            kw = {"t_bar": psi.t_bar, "omega_bar": psi.omega_bar, "sigma": psi.sigma}
            kw[var] += eps
            return GaussianSinglePhoton(**kw)

        got = overlap(psi, d)
        fd = (overlap(psi, shifted(h)) - overlap(psi, shifted(-h))) / (2.0 * h)
        assert got == pytest.approx(fd, abs=1e-8)

    def test_chain_rule_signs(self):
        # photon 1 responds to t_minus with -1/2, photon 2 with +1/2
        psi = GaussianSinglePhoton(0.0, 1.0, 1.0)
        d1 = derivative_single(psi, "t_minus", 1)
        d2 = derivative_single(psi, "t_minus", 2)
        assert overlap(psi, d1) == pytest.approx(-overlap(psi, d2), abs=1e-12)

    def test_unsupported_param(self):
        phi = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0)
        with pytest.raises((KeyError, ValueError)):
            derivative(phi, "not_a_param")


class TestCovariances:
    def test_time_covariance_independent(self):
        phi = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0)
        assert np.allclose(time_covariance(phi), 0.25 * np.eye(2))

    def test_time_sum_variance_anticorrelated(self):
        # kappa = -0.8, sigma = 1: Var(t1 + t2) = 1/3.6
        phi = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, -0.8)
        cov = time_covariance(phi)
        var_sum = cov[0, 0] + cov[1, 1] + 2.0 * cov[0, 1]
        assert var_sum == pytest.approx(1.0 / 3.6, abs=1e-12)

    def test_frequency_difference_variance(self):
        # kappa = -0.9, sigma = 1: Var(w2 - w1) = 2(1 + kappa) = 0.2
        phi = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, -0.9)
        cov = frequency_covariance(phi)
        var_diff = cov[0, 0] + cov[1, 1] - 2.0 * cov[0, 1]
        assert var_diff == pytest.approx(0.2, abs=1e-12)

    @pytest.mark.parametrize("kappa", [-0.9, -0.5, 0.0, 0.5, 0.9])
    def test_saturation_identities(self, kappa):
        # the Gaussian time/frequency statistics saturate the pure-state
        # information matrix: Var(t_plus) * H_tplus = Var(w_minus) * H_wminus = 1
        phi = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, kappa)
        H = qfi_entangled(1.0, 1.0, kappa, PAIR_A).H
        tc, fc = time_covariance(phi), frequency_covariance(phi)
        var_tp = tc[0, 0] + tc[1, 1] + 2.0 * tc[0, 1]
        var_wm = fc[0, 0] + fc[1, 1] - 2.0 * fc[0, 1]
        assert var_tp * H[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert var_wm * H[1, 1] == pytest.approx(1.0, abs=1e-12)

    def test_quadrature_time_marginals(self):
        # second moments of |phi|^2 on a grid match the covariance algebra
        phi = GaussianBiphoton(0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.6)
        t = np.linspace(-8, 8, 801)
        T1, T2 = np.meshgrid(t, t, indexing="ij")
        p = np.abs(biphoton_amplitude(phi, T1, T2)) ** 2
        z = np.trapezoid(np.trapezoid(p, t, axis=1), t)
        cov = time_covariance(phi)
        var1 = np.trapezoid(np.trapezoid(p * T1**2, t, axis=1), t) / z
        cross = np.trapezoid(np.trapezoid(p * T1 * T2, t, axis=1), t) / z
        assert var1 == pytest.approx(cov[0, 0], abs=1e-8)
        assert cross == pytest.approx(cov[0, 1], abs=1e-8)
