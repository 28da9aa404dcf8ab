"""Tests for the special-function layer.

mpmath (extended precision) serves as the independent oracle for grids;
single reference values were frozen from explicit series oracles summed in
extended precision, independent of the implementation under test.
"""

import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mellinkit import specfun as sf
from mellinkit.errors import DomainError, OrderTooHighError, PoleArgumentError

mp.mp.dps = 35

SQRT_PI = math.sqrt(math.pi)


def rel_err(approx, exact):
    exact = complex(exact)
    return abs(complex(approx) - exact) / max(abs(exact), 1e-300)


# ---------------------------------------------------------------------------
# gamma

class TestGamma:
    def test_classical_values(self):
        assert rel_err(sf.gamma(0.5), SQRT_PI) < 1e-14
        assert rel_err(sf.gamma(5.0), 24.0) < 1e-14
        # Gamma(-1.5) = 4 sqrt(pi)/3 by the recurrence from Gamma(0.5)
        assert rel_err(sf.gamma(-1.5), 4.0 * SQRT_PI / 3.0) < 1e-13

    def test_accuracy_on_real_range(self):
        # spec'd accuracy: rel err <= 1e-13 on [0.05, 30]
        for i in range(301):
            x = 0.05 + 29.95 * i / 300
            assert rel_err(sf.gamma(x), mp.gamma(x)) < 1e-13, x

    def test_complex_arguments(self):
        for z in (0.5 + 0.2j, 2.0 - 1.5j, 0.1 + 3.0j, -0.7 + 0.4j):
            exact = complex(mp.gamma(mp.mpc(z.real, z.imag)))
            assert rel_err(sf.gamma(z), exact) < 1e-12, z

    def test_reflection_identity(self):
        for s in (0.1, 0.3, 0.5 + 0.2j):
            sin = sf._sinpi_complex(complex(s)) if isinstance(s, complex) else math.sin(math.pi * s)
            val = sf.gamma(s) * sf.gamma(1 - s) * sin / math.pi
            assert abs(val - 1.0) < 1e-12, s

    def test_recurrence_on_grid(self):
        for i in range(50):
            s = 0.07 + 28.0 * i / 49
            assert rel_err(sf.gamma(s + 1.0), s * sf.gamma(s)) < 1e-13

    @pytest.mark.parametrize("s", [0.0, -1.0, -7.0, -3.0 + 5e-13, complex(-2.0, 0.0)])
    def test_pole_arguments_raise(self, s):
        with pytest.raises(PoleArgumentError):
            sf.gamma(s)

    def test_nonfinite_rejected(self):
        with pytest.raises(DomainError):
            sf.gamma(float("nan"))
        with pytest.raises(DomainError):
            sf.gamma(complex(1.0, float("inf")))

    def test_reciprocal_is_total(self):
        assert sf.gamma_reciprocal(-3.0) == 0.0
        assert rel_err(sf.gamma_reciprocal(4.0), 1.0 / 6.0) < 1e-14
        z = -2.5 + 0.0j
        assert rel_err(sf.gamma_reciprocal(z), 1.0 / complex(mp.gamma(-2.5))) < 1e-12


# ---------------------------------------------------------------------------
# polygamma

class TestPolygamma:
    def test_classical_values(self):
        assert rel_err(sf.polygamma(0, 1.0), -sf.EULER_GAMMA) < 1e-13
        assert rel_err(sf.polygamma(1, 1.0), math.pi ** 2 / 6.0) < 1e-13
        assert rel_err(sf.polygamma(0, 0.5), -sf.EULER_GAMMA - 2.0 * math.log(2.0)) < 1e-13

    @pytest.mark.parametrize("m", [0, 1, 2, 3, 4, 5, 6])
    def test_accuracy_against_mpmath(self, m):
        for i in range(40):
            x = 0.05 + 29.95 * i / 39
            exact = mp.polygamma(m, x) if m else mp.digamma(x)
            assert rel_err(sf.polygamma(m, x), exact) < 1e-12, (m, x)

    def test_negative_real_arguments(self):
        for x in (-0.5, -1.5, -4.3, -9.25):
            assert rel_err(sf.polygamma(0, x), mp.digamma(x)) < 1e-11, x
            assert rel_err(sf.polygamma(2, x), mp.polygamma(2, x)) < 1e-11, x

    def test_complex_argument(self):
        z = 0.5 + 0.2j
        for m in (0, 1, 3):
            exact = complex(mp.polygamma(m, mp.mpc(0.5, 0.2))) if m else complex(
                mp.digamma(mp.mpc(0.5, 0.2)))
            assert rel_err(sf.polygamma(m, z), exact) < 1e-11

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_matches_finite_difference_of_lower_order(self, m):
        # central difference of psi^(m-1) with near-optimal step
        for s in (0.8, 1.7, 3.2, 12.0):
            h = 1e-5
            fd = (sf.polygamma(m - 1, s + h) - sf.polygamma(m - 1, s - h)) / (2.0 * h)
            assert abs(fd - sf.polygamma(m, s)) <= 1e-6 * max(1.0, abs(fd))

    def test_pole_and_order_errors(self):
        with pytest.raises(PoleArgumentError):
            sf.polygamma(1, -2.0)
        with pytest.raises(DomainError):
            sf.polygamma(-1, 1.0)


# ---------------------------------------------------------------------------
# derivatives of gamma

def fd_derivative(f, s, order, h):
    """Central finite difference of given order with step h."""
    if order == 1:
        return (f(s + h) - f(s - h)) / (2.0 * h)
    if order == 2:
        return (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h)
    raise ValueError(order)


class TestGammaDeriv:
    def test_identity_case(self):
        assert rel_err(sf.gamma_deriv(0, 0.5), SQRT_PI) < 1e-14

    def test_first_derivative_is_gamma_times_psi(self):
        # exact as composed
        for s in (0.3, 1.0, 2.7, 11.0):
            composed = sf.gamma(s) * sf.polygamma(0, s)
            assert sf.gamma_deriv(1, s) == pytest.approx(composed, rel=1e-12, abs=1e-300)

    def test_second_derivative_at_one(self):
        # frozen from the finite-difference oracle with step sweep
        # (equals gamma^2 + pi^2/6 = 1.9781119906559451)
        assert rel_err(sf.gamma_deriv(2, 1.0), 1.9781119906559451) < 1e-12
        best = min(
            abs(fd_derivative(sf.gamma, 1.0, 2, h) - sf.gamma_deriv(2, 1.0))
            for h in (1e-3, 3e-4, 1e-4)
        )
        assert best < 1e-6

    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_higher_orders_against_mpmath(self, m):
        for s in (0.4, 1.3, 2.6):
            exact = mp.diff(mp.gamma, s, m)
            assert rel_err(sf.gamma_deriv(m, s), exact) < 1e-10, (m, s)

    def test_order_cap(self):
        with pytest.raises(OrderTooHighError):
            sf.gamma_deriv(sf.MAX_GAMMA_DERIV_ORDER + 1, 0.5)


# ---------------------------------------------------------------------------
# cosecant powers and derivatives

class TestCscDerivs:
    def test_base_cases(self):
        assert rel_err(sf.csc_deriv(0, 0.5), math.pi) < 1e-14
        # even symmetry about 1/2
        assert abs(sf.csc_deriv(1, 0.5)) < 1e-13
        # frozen from the finite-difference oracle: equals pi^3
        assert rel_err(sf.csc_deriv(2, 0.5), math.pi ** 3) < 1e-12

    def test_matches_finite_differences(self):
        f = lambda s: math.pi / math.sin(math.pi * s)
        for s in (0.3, 0.62):
            fd1 = min(
                (fd_derivative(f, s, 1, h) for h in (1e-5, 1e-6)),
                key=lambda v: abs(v - sf.csc_deriv(1, s)),
            )
            assert rel_err(sf.csc_deriv(1, s), fd1) < 1e-7

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_against_mpmath(self, m):
        for s in (0.2, 0.45, 0.8):
            exact = mp.diff(lambda z: mp.pi / mp.sin(mp.pi * z), s, m)
            assert rel_err(sf.csc_deriv(m, s), exact) < 1e-11, (m, s)

    def test_power_form(self):
        assert rel_err(sf.csc_power(2, 0.5), math.pi ** 2) < 1e-14
        assert rel_err(sf.csc_power(3, 0.25), (math.pi / math.sin(math.pi * 0.25)) ** 3) < 1e-14
        assert sf.csc_power(0, 0.37) == 1.0

    def test_pole_arguments(self):
        with pytest.raises(PoleArgumentError):
            sf.csc_deriv(0, 2.0)
        with pytest.raises(PoleArgumentError):
            sf.csc_power(2, -1.0)


# ---------------------------------------------------------------------------
# harmonic numbers

class TestHarmonic:
    def test_values(self):
        assert sf.harmonic(0) == 0.0
        assert sf.harmonic(1) == 1.0
        assert rel_err(sf.harmonic(3), 11.0 / 6.0) < 1e-15

    def test_matches_digamma(self):
        for k in (2, 7, 40):
            assert rel_err(sf.harmonic(k), mp.digamma(k + 1) + mp.euler) < 1e-14

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            sf.harmonic(-1)


# ---------------------------------------------------------------------------
# modified Bessel K0

class TestBesselK0:
    def test_reference_value(self):
        # frozen from the ascending series summed at 50 significant digits
        assert rel_err(sf.bessel_k0(1.0), 0.42102443824070833334) < 1e-13

    def test_accuracy_range(self):
        # spec'd accuracy 1e-11 on [1e-6, 50]
        xs = [1e-6, 1e-4, 0.01, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 3.0, 7.5, 20.0, 50.0]
        for x in xs:
            assert rel_err(sf.bessel_k0(x), mp.besselk(0, x)) < 1e-11, x

    def test_small_x_asymptotic(self):
        # K0(x) + ln(x/2) + gamma -> 0
        for x in (1e-6, 1e-8):
            drift = sf.bessel_k0(x) + math.log(0.5 * x) + sf.EULER_GAMMA
            assert abs(drift) < 1e-10

    def test_substitution_consistency(self):
        # x -> 2 sqrt(u) with u = 0.25 lands back on K0(1)
        assert sf.bessel_k0(2.0 * math.sqrt(0.25)) == sf.bessel_k0(1.0)

    def test_branch_agreement_on_crossover_band(self):
        for i in range(21):
            x = 1.5 + i * 0.05
            a = sf._k0_series(x)
            b = sf._k0_cf(x)
            assert abs(a - b) <= 1e-10 * abs(a), x

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.bessel_k0(0.0)
        with pytest.raises(DomainError):
            sf.bessel_k0(-2.0)


# ---------------------------------------------------------------------------
# polylogarithms

class TestPolylog:
    def test_special_values(self):
        assert rel_err(sf.polylog(2, 1.0), math.pi ** 2 / 6.0) < 1e-14
        assert rel_err(sf.polylog(2, -1.0), -math.pi ** 2 / 12.0) < 1e-14
        assert rel_err(sf.polylog(3, 1.0), 1.2020569031595942854) < 1e-14

    @pytest.mark.parametrize("n", [2, 3])
    def test_against_mpmath_below_one(self, n):
        xs = [-9.0, -2.5, -1.0, -0.83, -0.5, -0.21, 0.0, 0.17, 0.5, 0.77, 0.95, 0.999]
        for x in xs:
            assert rel_err(sf.polylog(n, x), mp.polylog(n, x)) < 1e-13, (n, x)

    @pytest.mark.parametrize("n", [2, 3])
    def test_principal_branch_above_one(self, n):
        for x in (1.5, 2.0, 7.0, 40.0):
            mine = sf.polylog(n, x)
            exact = complex(mp.polylog(n, x))
            assert rel_err(mine, exact) < 1e-12, (n, x)

    def test_dilog_reflection(self):
        # Li2(x) + Li2(1-x) = pi^2/6 - ln(x) ln(1-x) on (0, 1)
        for i in range(1, 20):
            x = i / 20.0
            lhs = sf.polylog(2, x) + sf.polylog(2, 1.0 - x)
            rhs = math.pi ** 2 / 6.0 - math.log(x) * math.log(1.0 - x)
            assert abs(lhs - rhs) < 1e-11, x

    def test_real_branch_combination(self):
        # the combination log(1-x) log(x) + Li2(x) is real for x > 1
        for x in (1.0 + 1e-9, 1.5, 3.0, 25.0):
            combo = sf.re_combo2(x)
            z = complex(mp.log(mp.mpc(1.0 - x)) * mp.log(x) + mp.polylog(2, mp.mpc(x, 0)))
            assert abs(z.imag) < 1e-20 or abs(z.imag) < 1e-12 * abs(z.real)
            assert rel_err(combo, z.real) < 1e-11, x
        assert rel_err(sf.re_combo2(1.0), math.pi ** 2 / 6.0) < 1e-14

    def test_order_validation(self):
        with pytest.raises(DomainError):
            sf.polylog(4, 0.5)

    @given(st.floats(min_value=-50.0, max_value=0.999))
    @settings(max_examples=60, deadline=None)
    def test_square_identity_property(self, x):
        # Li2(x) + Li2(-x) = Li2(x^2)/2
        if abs(x) < 1e-12 or x * x >= 1.0:
            return
        lhs = sf.polylog(2, x) + sf.polylog(2, -x)
        rhs = 0.5 * sf.polylog(2, x * x)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


# ---------------------------------------------------------------------------
# e^x Gamma(0, x)

class TestExpxGamma0:
    def test_reference_value(self):
        # frozen from the E1 series oracle at 50 digits: e * E1(1)
        assert rel_err(sf.expx_gamma0(1.0), 0.59634736232319407434) < 1e-13

    def test_against_mpmath(self):
        for x in (1e-4, 0.05, 0.4, 1.0, 1.2, 1.3, 2.0, 10.0, 80.0, 700.0, 1e6):
            exact = mp.exp(x) * mp.expint(1, x)
            assert rel_err(sf.expx_gamma0(x), exact) < 1e-12, x

    def test_small_x_behavior(self):
        # E1(x) = -ln x - gamma + O(x)
        x = 1e-9
        assert abs(sf.expx_gamma0(x) - (-math.log(x) - sf.EULER_GAMMA)) < 1e-7

    def test_large_x_behavior(self):
        x = 1e8
        assert rel_err(sf.expx_gamma0(x), 1.0 / x) < 1e-7

    def test_domain(self):
        with pytest.raises(DomainError):
            sf.expx_gamma0(0.0)
        with pytest.raises(DomainError):
            sf.expx_gamma0(-1.0)
