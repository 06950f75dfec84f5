"""
Tests for Bessel kernels and the numerical evaluation of formulas.
"""

import sys
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.qseries import expand_eta_quotient
from core.registry import registry_lookup
from evaluation.bessel import bessel_i, bessel_i_three_halves, sinh_kernel
from evaluation.evaluator import evaluate_formula, evaluate_range, hr_asymptotic, phase_sum
from formulas.builtin import builtin_formula
from formulas.ir import ALL_K, ONE, PI, BesselKernel, FormulaCase, RademacherFormula, linear
from utils.errors import DomainError, FormulaEvaluationError


def _close(a, b, digits):
    return abs(a - b) <= mpmath.mpf(10) ** -digits * max(1, abs(b))


class TestBessel:
    """Test the ascending-series Bessel function."""

    def test_zero_argument(self):
        """I_nu(0) = 0 for nu >= 1."""
        assert bessel_i(1, 0) == 0
        assert bessel_i(Fraction(3, 2), 0) == 0

    def test_known_value(self):
        """I_1(2) = 1.5906368546373290..."""
        with mpmath.workdps(40):
            value = bessel_i(1, 2)
            assert _close(value, mpmath.mpf("1.5906368546373290634"), 18)
            assert _close(value, mpmath.besseli(1, 2), 35)

    @pytest.mark.parametrize("nu", [1, Fraction(3, 2), 2, Fraction(5, 2), 7])
    @pytest.mark.parametrize("x", ["0.5", "5", "30", "120"])
    def test_matches_mpmath(self, nu, x):
        """Agrees with mpmath.besseli to 45 digits."""
        with mpmath.workdps(50):
            order = mpmath.mpf(nu.numerator) / nu.denominator if isinstance(nu, Fraction) else nu
            expected = mpmath.besseli(order, mpmath.mpf(x))
            assert _close(bessel_i(nu, mpmath.mpf(x)), expected, 45)

    @pytest.mark.parametrize("x", ["0.1", "1", "10", "30"])
    def test_three_halves_closed_form(self, x):
        """The elementary I_{3/2} equals the series."""
        with mpmath.workdps(50):
            series = bessel_i(Fraction(3, 2), mpmath.mpf(x))
            closed = bessel_i_three_halves(mpmath.mpf(x))
            assert _close(series, closed, 44)

    def test_three_halves_at_one(self):
        """I_{3/2}(1) = sqrt(2/pi)(cosh 1 - sinh 1)."""
        with mpmath.workdps(50):
            expected = mpmath.sqrt(2 / mpmath.pi) * (mpmath.cosh(1) - mpmath.sinh(1))
            assert _close(bessel_i(Fraction(3, 2), 1), expected, 45)

    def test_explicit_precision(self):
        """The precision argument overrides the ambient one."""
        value = bessel_i(1, 2, precision=60)
        with mpmath.workdps(60):
            assert _close(value, mpmath.besseli(1, 2), 55)

    def test_invalid_order(self):
        """Orders below 1 or off the half-integers are rejected."""
        with pytest.raises(DomainError):
            bessel_i(Fraction(1, 2), 1)
        with pytest.raises(DomainError):
            bessel_i(Fraction(4, 3), 1)

    def test_negative_argument(self):
        """Negative arguments are rejected."""
        with pytest.raises(DomainError):
            bessel_i(1, -1)


class TestSinhKernel:
    """Test the sinh-derivative kernel."""

    def test_unit_point(self):
        """n - a = 1, c = 1, k = 1 gives (cosh 1 - sinh 1)/2."""
        with mpmath.workdps(40):
            value = sinh_kernel(1, 1, 1)
            assert _close(value, mpmath.exp(-1) / 2, 35)
            assert abs(float(value) - 0.18393972058572116) < 1e-15

    def test_matches_numerical_derivative(self):
        """Closed form equals a numerical n-derivative."""
        with mpmath.workdps(50):
            c = mpmath.pi * mpmath.sqrt(mpmath.mpf(2) / 3)
            a = mpmath.mpf(1) / 24

            def g(n):
                y = mpmath.sqrt(n - a)
                return mpmath.sinh(c / 5 * y) / y

            assert _close(sinh_kernel(5, 5, c, a), mpmath.diff(g, 5), 30)

    def test_relation_to_three_halves(self):
        """I_{3/2}(z) = sqrt(2z/pi) d/dz (sinh z / z)."""
        with mpmath.workdps(50):
            z = mpmath.mpf(3)
            derivative = mpmath.diff(lambda t: mpmath.sinh(t) / t, z)
            assert _close(bessel_i(Fraction(3, 2), z), mpmath.sqrt(2 * z / mpmath.pi) * derivative, 30)

    def test_needs_n_above_shift(self):
        """n <= a is outside the domain."""
        with pytest.raises(DomainError):
            sinh_kernel(1, 1, 1, a=1)


class TestEvaluateFormula:
    """Test truncated formula evaluation."""

    def test_partitions_small(self, rademacher):
        """p(1) = 1 and p(5) = 7 from ten terms."""
        assert evaluate_formula(rademacher, 1, K=10).rounded == 1
        result = evaluate_formula(rademacher, 5, K=10)
        assert result.rounded == 7
        assert result.k_used == 10

    def test_partitions_two_hundred(self, rademacher):
        """p(200) = 3972999029388."""
        result = evaluate_formula(rademacher, 200, K=40, digits=40)
        assert result.rounded == 3972999029388
        assert result.error_against(3972999029388) < 0.5

    def test_distinct_parts_hundred(self, hagis):
        """delta(100) = 444793 within the published error."""
        result = evaluate_formula(hagis, 100, K=10)
        assert result.rounded == 444793
        assert result.error_against(444793) < 0.25
        assert result.k_used == 5

    @pytest.mark.parametrize("name", ["rademacher_p", "hagis_distinct", "niven", "s27", "s107", "s110"])
    @pytest.mark.parametrize("n", [1, 50, 100])
    def test_imaginary_part_cancels(self, name, n):
        """The h-sums are real up to rounding."""
        result = evaluate_formula(builtin_formula(name), n, K=10)
        assert result.imag_residual < mpmath.mpf(10) ** -25

    def test_precision_doubling(self, hagis):
        """Values at 30 and 60 digits agree to 20 digits."""
        low = evaluate_formula(hagis, 77, K=10, digits=30).value
        high = evaluate_formula(hagis, 77, K=10, digits=60).value
        assert _close(low, high, 20)

    def test_truncation_improves(self, rademacher):
        """Ten terms beat the leading term at n = 100."""
        exact = expand_eta_quotient(registry_lookup("p").eta, 100)[100]
        leading = evaluate_formula(rademacher, 100, K=1).error_against(exact)
        ten = evaluate_formula(rademacher, 100, K=10).error_against(exact)
        assert ten < leading
        assert ten < 0.5

    def test_deterministic(self, hagis):
        """Repeated evaluation is bit-identical."""
        assert evaluate_formula(hagis, 60, K=10).value == evaluate_formula(hagis, 60, K=10).value

    def test_default_truncation(self, hagis):
        """K falls back to the configured truncation."""
        assert evaluate_formula(hagis, 20).k_used == 5

    def test_range(self, hagis):
        """evaluate_range keeps the order of its points."""
        results = evaluate_range(hagis, [3, 1, 2], K=10)
        assert [r.rounded for r in results] == [2, 1, 1]

    def test_invalid_arguments(self, hagis):
        """n and K must be positive and the precision reasonable."""
        with pytest.raises(DomainError):
            evaluate_formula(hagis, 0)
        with pytest.raises(DomainError):
            evaluate_formula(hagis, 5, K=0)
        with pytest.raises(DomainError):
            evaluate_formula(hagis, 5, digits=10)

    def test_kernel_failure_carries_context(self, hagis):
        """A kernel that fails names the formula, the case and k."""
        case = hagis.cases[0]
        broken = RademacherFormula(
            name="broken",
            prefactor=ONE,
            cases=(FormulaCase(
                d=1,
                restriction=ALL_K,
                weight=ONE,
                omega_desc=case.omega_desc,
                kernel=BesselKernel(kind="bessel_i", order=1, coefficient=PI, radicand=linear(1, -10)),
                k_power=-1,
            ),),
            oracle=hagis.oracle,
        )
        with pytest.raises(FormulaEvaluationError) as excinfo:
            evaluate_formula(broken, 1, K=3)
        assert excinfo.value.context["formula"] == "broken"
        assert excinfo.value.context["k"] == 1
        assert excinfo.value.context["n"] == 1


class TestPhaseSum:
    """Test the inner h-sums."""

    def test_trivial_k(self, rademacher):
        """A_1(n) = 1."""
        with mpmath.workdps(30):
            assert phase_sum(rademacher.cases[0].omega_desc, 17, 1) == 1

    def test_second_kloosterman_sum(self, rademacher):
        """A_2(n) = (-1)^n for p(n)."""
        desc = rademacher.cases[0].omega_desc
        with mpmath.workdps(30):
            for n in range(1, 9):
                value = phase_sum(desc, n, 2)
                assert abs(value - (-1) ** n) < mpmath.mpf(10) ** -25


class TestAsymptotic:
    """Test the leading-order estimate."""

    def test_ratio_at_two_hundred(self):
        """The estimate overshoots p(200) by about three percent."""
        exact = expand_eta_quotient(registry_lookup("p").eta, 200)[200]
        ratio = hr_asymptotic(200) / exact
        assert 1.02 < ratio < 1.045

    def test_ratio_tends_to_one(self):
        """The relative error shrinks with n."""
        p = expand_eta_quotient(registry_lookup("p").eta, 200).coeffs
        errors = [abs(hr_asymptotic(n) / p[n] - 1) for n in (10, 50, 200)]
        assert errors[0] > errors[1] > errors[2]

    def test_needs_positive_n(self):
        """n = 0 is rejected."""
        with pytest.raises(DomainError):
            hr_asymptotic(0)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
