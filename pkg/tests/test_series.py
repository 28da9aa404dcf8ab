"""Tests for series synthesis, the root-test constant and truncated
evaluation."""

import math

import pytest

from mellinkit import catalog, series, specfun
from mellinkit.catalog import KernelFunction
from mellinkit.errors import ConvergenceError, RadiusExceededError
from mellinkit.jets import PrincipalPart

EULER = specfun.EULER_GAMMA


def simple_handle(kernel_id, coeff_id, closed=None):
    return series.handle(catalog.kernel(kernel_id), catalog.coefficient(coeff_id),
                         closed_form=closed)


class TestTerm:
    def test_simple_gamma_term(self):
        h = simple_handle("gamma", "const_one")
        # (-1)^2/2! * 1 * 1^2
        assert series.term(h, 2, 1.0) == pytest.approx(0.5, rel=1e-15)

    def test_general_gamma_squared_term(self):
        # k = 0, x = e: -(2 gamma + 1) after substituting H_0 = 0, log x = 1
        h = series.handle(catalog.kernel("gamma_squared"),
                          catalog.coefficient("const_one"), mode="general")
        got = series.term(h, 0, math.e)
        assert got == pytest.approx(-(2.0 * EULER + 1.0), rel=1e-14)

    def test_conjecture_series_matches_incomplete_gamma(self):
        # m=2, g = 1/Gamma(z+1): the summed series is -e^x Gamma(0, x)
        h = series.handle(catalog.kernel("pi_csc_pow:2"),
                          catalog.coefficient("inv_gamma"),
                          mode="conjecture", m=2, radius_hint=1.0)
        for x in (0.2, 0.5, 0.7):
            got = series.sum_series(h, x, tol=1e-13)
            assert got == pytest.approx(-specfun.expx_gamma0(x), rel=1e-11), x

    def test_pole_gap_terms_vanish(self):
        h = simple_handle("gamma_cos_half", "const_one")
        assert series.term(h, 1, 0.7) == 0.0
        assert series.term(h, 3, 0.7) == 0.0

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_conjecture_terms_match_general_residues(self, m):
        # the P_m operator summand coincides with the residue of the
        # cosecant-power kernel computed from its Laurent principal part
        g = catalog.coefficient("inv_linear")
        kern = catalog.kernel(f"pi_csc_pow:{m}")
        conj = series.handle(kern, g, mode="conjecture", m=m, radius_hint=1.0)
        gen = series.handle(kern, g, mode="general", radius_hint=1.0)
        sign = 1.0 if (m - 1) % 2 == 0 else -1.0
        fac = math.factorial(m - 1)
        for k in range(7):
            for x in (0.3, 1.0, 2.2):
                lhs = series.term(gen, k, x)
                rhs = series.term(conj, k, x) * sign / fac
                assert lhs == pytest.approx(rhs, rel=1e-12), (m, k, x)


class TestEstimateL:
    def test_gamma_kernel(self):
        h = simple_handle("gamma", "const_one")
        est = series.estimate_L(h, 64)
        assert abs(est.value - 1.0) <= 0.02
        assert est.plateau
        assert est.radius == pytest.approx(1.0, abs=0.02)

    def test_pi_csc_kernel(self):
        est = series.estimate_L(simple_handle("pi_csc", "const_one"), 64)
        assert abs(est.value - 1.0) <= 0.02

    def test_pole_gap_kernel(self):
        est = series.estimate_L(simple_handle("gamma_cos_half", "const_one"), 64)
        assert abs(est.value - 1.0) <= 0.02

    def test_synthetic_doubling_kernel(self):
        # residues 2^k / k! against phi(k) = -pi/k!: the limit is 2
        def pp(k):
            r = 2.0 ** k / math.factorial(k)
            return PrincipalPart(k, 1, (r,))

        kern = KernelFunction(
            "synthetic_2k", lambda s: float("nan"), pp,
            lambda z: -math.pi / specfun.gamma(1.0 + z))
        h = series.handle(kern, catalog.coefficient("const_one"))
        est = series.estimate_L(h, 64)
        assert abs(est.value - 2.0) <= 0.05

    def test_kmax_validation(self):
        with pytest.raises(ValueError):
            series.estimate_L(simple_handle("gamma", "const_one"), 4)

    def test_higher_order_kernel_rejected(self):
        h = series.handle(catalog.kernel("gamma_squared"),
                          catalog.coefficient("const_one"), mode="general")
        with pytest.raises(ValueError):
            series.estimate_L(h, 32)


class TestEvalSeries:
    def test_exponential_sum(self):
        h = simple_handle("gamma", "const_one", closed=lambda x: math.exp(-x))
        got = series.eval_series(h, 1.0, tol=1e-12, force_series=True)
        assert got == pytest.approx(math.exp(-1.0), rel=1e-12)
        # with the closed form registered, x past the radius switch uses it
        assert series.eval_series(h, 1.0) == math.exp(-1.0)

    def test_gamma_squared_matches_bessel(self):
        h = series.handle(catalog.kernel("gamma_squared"),
                          catalog.coefficient("const_one"), mode="general")
        # frozen oracle: 2 K0(1) = 0.84204887648141666667
        got = series.eval_series(h, 0.25, tol=1e-13)
        assert got == pytest.approx(0.84204887648141666667, rel=1e-12)

    def test_geometric_sum(self):
        h = simple_handle("pi_csc", "const_one")
        assert series.eval_series(h, 0.5, tol=1e-12) == pytest.approx(2.0 / 3.0, rel=1e-11)

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_scaled_exponential_property(self, a):
        h = series.handle(catalog.kernel("gamma"),
                          catalog.coefficient(f"power_a:{a:g}"))
        assert h.radius_hint == pytest.approx(1.0 / a, rel=1e-12)
        for x in (0.1, 0.3, 0.6):
            if x < 0.75 * h.radius_hint:
                got = series.eval_series(h, x, tol=1e-12)
                assert got == pytest.approx(math.exp(-a * x), rel=1e-11), (a, x)

    def test_derivative_m0_reduces_to_simple_exactly(self):
        base = simple_handle("gamma", "inv_linear")
        deriv = series.handle(catalog.kernel("gamma"),
                              catalog.coefficient("inv_linear"),
                              mode="derivative", m=0)
        for k in range(51):
            for x in (0.2, 1.3):
                assert series.term(deriv, k, x) == series.term(base, k, x)

    def test_conjecture_m1_reproduces_classical_summand_exactly(self):
        g = catalog.coefficient("inv_gamma")
        conj = series.handle(catalog.kernel("pi_csc_pow:1"), g,
                             mode="conjecture", m=1, radius_hint=1.0)
        classical = series.handle(catalog.kernel("pi_csc"), g, mode="simple",
                                  radius_hint=1.0)
        for k in range(51):
            for x in (0.4, 0.9):
                want = classical and series.term(classical, k, x)
                assert series.term(conj, k, x) == want

    def test_tail_bound_on_geometric_and_exponential(self):
        # the reported stopping rule must bound the true remainder
        for handle_, exact, x in (
                (simple_handle("pi_csc", "const_one"), 1.0 / 1.6, 0.6),
                (simple_handle("gamma", "const_one"), math.exp(-0.6), 0.6)):
            for tol in (1e-6, 1e-10):
                got = series.eval_series(handle_, x, tol=tol, force_series=True)
                assert abs(got - exact) <= 5.0 * tol * abs(exact), (handle_, tol)

    def test_nonconvergence_at_cap(self):
        h = simple_handle("pi_csc", "const_one")
        with pytest.raises(ConvergenceError):
            series.sum_series(h, 0.999, tol=1e-12, k_cap=200)

    def test_radius_exceeded_without_closed_form(self):
        h = simple_handle("pi_csc", "const_one")
        with pytest.raises(RadiusExceededError):
            series.eval_series(h, 1.5)

    def test_positive_x_required(self):
        h = simple_handle("gamma", "const_one")
        with pytest.raises(ValueError):
            series.eval_series(h, 0.0)


class TestSeamCheck:
    def test_registered_seam_is_tight(self):
        h = simple_handle("gamma", "const_one", closed=lambda x: math.exp(-x))
        x_seam, mismatch = series.seam_check(h, 1e-12)
        assert x_seam == pytest.approx(0.75)
        assert mismatch < 1e-12

    def test_corrupted_closed_form_is_caught(self):
        h = simple_handle("gamma", "const_one",
                          closed=lambda x: math.exp(-x) * 1.001)
        _, mismatch = series.seam_check(h, 1e-12)
        assert mismatch > 1e-4

    def test_requires_closed_form(self):
        with pytest.raises(ValueError):
            series.seam_check(simple_handle("gamma", "const_one"), 1e-10)


class TestHandleValidation:
    def test_mode_validation(self):
        with pytest.raises(ValueError):
            series.SeriesHandle(catalog.kernel("gamma"),
                                catalog.coefficient("const_one"), mode="weird")

    def test_conjecture_needs_positive_m(self):
        with pytest.raises(ValueError):
            series.SeriesHandle(catalog.kernel("pi_csc_pow:2"),
                                catalog.coefficient("const_one"),
                                mode="conjecture", m=0)
