import math

import mpmath as mp
import numpy as np
import pytest

import helsonspec as hs
from helsonspec import DomainError, KernelFamily, KernelSpec

mp.mp.dps = 30


class TestZeta:
    def test_known_closed_forms(self):
        assert abs(hs.riemann_zeta_real(2.0) - math.pi ** 2 / 6) <= 1e-12
        assert abs(hs.riemann_zeta_real(4.0) - math.pi ** 4 / 90) <= 1e-12

    def test_large_argument_tail(self):
        # zeta(31) = 1 + 2^-31 + 3^-31 + O(4^-31)
        val = hs.riemann_zeta_real(31.0)
        assert abs(val - (1.0 + 2.0 ** -31)) <= 2.0 * 3.0 ** -31
        assert abs(val - float(mp.zeta(31))) <= 1e-15

    @pytest.mark.parametrize("t", [1.0000001, 1.001, 1.1, 1.4999, 1.5, 1.7,
                                   2.5, 3.0, 7.5, 12.0, 30.0, 80.0, 250.0])
    def test_against_mpmath(self, t):
        ref = float(mp.zeta(mp.mpf(t)))
        assert abs(hs.riemann_zeta_real(t) - ref) <= 1e-13 * ref

    def test_monotone_decreasing_to_one(self):
        # strict monotonicity is representable up to t ~ 45 (2^-t vs eps)
        ts = np.linspace(1.01, 45.0, 200)
        vals = [hs.riemann_zeta_real(t) for t in ts]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert all(v > 1.0 for v in vals)
        assert hs.riemann_zeta_real(1e3) == pytest.approx(1.0, abs=1e-15)

    def test_tail_bound_invariant(self):
        # |zeta(t) - 1 - 2^-t| <= 2 * 3^-t for t >= 4; in doubles the bound
        # is representable up to t ~ 33, beyond that verify in high precision
        for t in np.linspace(4.0, 30.0, 30):
            assert abs(hs.riemann_zeta_real(t) - 1.0 - 2.0 ** -t) <= 2.0 * 3.0 ** -t
        for t in (40, 60, 90):
            assert abs(mp.zeta(t) - 1 - mp.mpf(2) ** -t) <= 2 * mp.mpf(3) ** -t

    @pytest.mark.parametrize("t", [1.0, 0.5, 0.0, -3.0])
    def test_domain(self, t):
        with pytest.raises(DomainError):
            hs.riemann_zeta_real(t)


class TestKernels:
    def test_carleman(self):
        assert hs.kernel_eval(KernelSpec(KernelFamily.CARLEMAN), 2.0) == 0.5

    def test_h0_value_and_bound(self):
        val = hs.kernel_eval(KernelSpec(KernelFamily.H0), 1.0)
        assert val == pytest.approx(hs.riemann_zeta_real(2.0) - 1.0, rel=1e-14)
        assert val == pytest.approx(0.6449340668, abs=1e-9)
        assert val <= 1.0

    def test_hstar_value(self):
        val = hs.kernel_eval(KernelSpec(KernelFamily.HSTAR), 2.0)
        assert val == pytest.approx(float(mp.exp(-1) / 2), rel=1e-13)

    def test_h0_dominated_by_carleman(self):
        # h_0(t) <= 1/t on a 1000-point log grid
        t = np.logspace(-8, 3, 1000)
        h0 = hs.kernel_eval(KernelSpec(KernelFamily.H0), t)
        assert np.all(h0 <= 1.0 / t)
        assert np.all(h0 >= 0.0)

    @pytest.mark.parametrize("a", [2.0, 2.5, 4.0])
    def test_ha_dominated_for_a_ge_2(self, a):
        t = np.logspace(-8, 3, 1000)
        ha = hs.kernel_eval(KernelSpec(KernelFamily.HA, a), t)
        assert np.all(ha <= 1.0 / t)

    def test_wa_splitting_identity(self):
        # w_a = h_a - e^{-at/2} pointwise, to 1e-14 of the h_a scale (the
        # subtraction itself rounds at eps * h_a)
        t = np.logspace(-10, 2, 300)
        for a in (0.5, 1.0, 3.0):
            wa = hs.kernel_eval(KernelSpec(KernelFamily.WA, a), t)
            ha = hs.kernel_eval(KernelSpec(KernelFamily.HA, a), t)
            diff = ha - np.exp(-0.5 * a * t)
            assert np.all(np.abs(wa - diff) <= 1e-14 * np.maximum(ha, 1e-300))

    def test_all_families_finite_nonnegative(self):
        t = np.logspace(-12, 2, 50)
        specs = [KernelSpec(KernelFamily.CARLEMAN), KernelSpec(KernelFamily.HSTAR),
                 KernelSpec(KernelFamily.H0), KernelSpec(KernelFamily.HA, 1.0),
                 KernelSpec(KernelFamily.WA, 1.0),
                 KernelSpec(KernelFamily.RANK_ONE_EXP, 1.0)]
        for spec in specs:
            vals = hs.kernel_eval(spec, t)
            assert np.all(np.isfinite(vals)) and np.all(vals >= 0.0)

    def test_domain_and_configuration_errors(self):
        with pytest.raises(DomainError):
            hs.kernel_eval(KernelSpec(KernelFamily.CARLEMAN), 0.0)
        with pytest.raises(DomainError):
            hs.kernel_eval(KernelSpec(KernelFamily.H0), -1.0)
        with pytest.raises(hs.ConfigurationError):
            KernelSpec(KernelFamily.HA)  # missing parameter
        with pytest.raises(hs.ConfigurationError):
            KernelSpec(KernelFamily.RANK_ONE_EXP, a=0.0)


class TestLogGamma:
    def test_gamma_one_is_zero(self):
        assert abs(hs.log_gamma_complex(1.0)) <= 1e-14

    def test_gamma_half_vs_quadrature_oracle(self):
        # Gamma(1/2) = int_0^inf t^{-1/2} e^{-t} dt, by quadrature
        oracle = float(mp.quad(lambda t: mp.exp(-t) / mp.sqrt(t), [0, mp.inf]))
        assert hs.log_gamma_complex(0.5).real == pytest.approx(math.log(oracle), abs=1e-12)
        assert hs.log_gamma_complex(0.5).real == pytest.approx(0.5723649429, abs=1e-9)

    def test_recurrence(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            z = complex(rng.uniform(0.1, 40.0), rng.uniform(-40.0, 40.0))
            lhs = hs.log_gamma_complex(z + 1.0) - hs.log_gamma_complex(z) - np.log(z)
            assert abs(lhs) <= 1e-12

    def test_against_mpmath_rectangle(self):
        for re in (0.05, 0.5, 1.0, 10.0, 50.0):
            for im in (-50.0, -7.0, 0.0, 0.3, 21.0, 50.0):
                z = complex(re, im)
                ref = complex(mp.loggamma(mp.mpc(re, im)))
                assert abs(hs.log_gamma_complex(z) - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_domain(self):
        with pytest.raises(DomainError):
            hs.log_gamma_complex(-1.0 + 2.0j)


class TestBesselKImagOrder:
    def test_k0_at_one_vs_quadrature_oracle(self):
        # K_0(1) = int_0^inf e^{-cosh s} ds; the tail beyond s = 12 is below
        # e^{-81000}, so a finite cut is exact at this precision
        oracle = float(mp.quad(lambda s: mp.exp(-mp.cosh(s)), [0, 12]))
        assert hs.bessel_k_imag_order(0.0, 1.0) == pytest.approx(oracle, rel=1e-12)
        assert oracle == pytest.approx(0.4210244382407083, abs=1e-15)

    @pytest.mark.parametrize("k", [0.0, 1e-6, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0])
    @pytest.mark.parametrize("x", [0.02, 0.3, 0.9, 1.0, 2.0, 8.0, 30.0])
    def test_against_mpmath(self, k, x):
        got = hs.bessel_k_imag_order(k, x)
        ref = float(mp.besselk(mp.mpc(0, k), x).real) if k > 0 else float(mp.besselk(0, x))
        assert abs(got - ref) <= 1e-10 * max(1.0, abs(ref))

    def test_branch_agreement_on_overlap(self):
        from helsonspec.specialfn import _k0_series, _k_ik_integral, _k_ik_series
        xs = np.linspace(0.5, 2.0, 9)
        for k in (0.0, 0.3, 1.0, 3.0, 8.0, 20.0):
            series = _k0_series(xs) if k == 0.0 else _k_ik_series(k, xs)
            integral = _k_ik_integral(k, xs)
            assert np.all(np.abs(series - integral) <= 1e-10 * np.maximum(1.0, np.abs(series)))

    def test_series_vs_integral_spec_point(self):
        from helsonspec.specialfn import _k_ik_integral, _k_ik_series
        x = np.array([0.3])
        d = abs(_k_ik_series(1.0, x)[0] - _k_ik_integral(1.0, x)[0])
        assert d <= 1e-10

    def test_domain(self):
        with pytest.raises(DomainError):
            hs.bessel_k_imag_order(0.5, 0.0)
        with pytest.raises(DomainError):
            hs.bessel_k_imag_order(-0.1, 1.0)
        with pytest.raises(DomainError):
            hs.bessel_k_imag_order(21.0, 1.0)

    def test_k_zero_is_limit_not_error(self):
        v0 = hs.bessel_k_imag_order(0.0, 0.4)
        ve = hs.bessel_k_imag_order(1e-6, 0.4)
        assert v0 == pytest.approx(ve, rel=1e-8)


class TestEigenCurve:
    def test_lambda_endpoints(self):
        assert hs.lambda_of_k(0.0) == math.pi
        assert hs.lambda_of_k(1.0) == pytest.approx(0.27101, abs=1e-5)
        assert hs.lambda_of_k(0.5) > hs.lambda_of_k(1.0)

    def test_k_of_lambda_roundtrip(self):
        for lam in np.linspace(0.011, math.pi, 50):
            assert abs(hs.lambda_of_k(hs.k_of_lambda(lam)) - lam) <= 1e-12
        assert hs.k_of_lambda(math.pi) == 0.0
        assert hs.k_of_lambda(math.pi / math.cosh(math.pi)) == pytest.approx(1.0, abs=1e-10)

    def test_k_of_lambda_arccosh_oracle(self):
        lam = math.pi / 2
        assert math.cosh(math.pi * hs.k_of_lambda(lam)) == pytest.approx(2.0, rel=1e-14)

    def test_domains(self):
        with pytest.raises(DomainError):
            hs.lambda_of_k(-0.1)
        with pytest.raises(DomainError):
            hs.k_of_lambda(0.0)
        with pytest.raises(DomainError):
            hs.k_of_lambda(3.2)


class TestPsi:
    def test_definitional_composition(self):
        k, t = 0.5, 1.0
        expected = (math.sqrt(2 * k * math.sinh(math.pi * k)) / math.pi
                    * t ** -0.5 * hs.bessel_k_imag_order(k, t / 2))
        assert hs.psi_k(k, t) == pytest.approx(expected, rel=1e-15)

    def test_decay_envelope(self):
        t = np.linspace(10.0, 40.0, 120)
        vals = hs.psi_k(0.5, t)
        assert np.all(np.isfinite(vals))
        assert np.all(np.abs(vals) <= 5.0 * np.exp(-t / 4.0))

    def test_oscillation_near_zero(self):
        t = np.logspace(-6, 0, 400)
        signs = np.sign(hs.psi_k(1.0, t))
        assert np.sum(np.abs(np.diff(signs)) > 0) >= 1

    def test_domain(self):
        with pytest.raises(DomainError):
            hs.psi_k(0.0, 1.0)
        with pytest.raises(DomainError):
            hs.psi_k(0.5, -1.0)
