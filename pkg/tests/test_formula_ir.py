"""
Tests for the formula intermediate representation: expressions, kernels,
cases, JSON and LaTeX.
"""

import json
import sys
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest
from pydantic import ValidationError

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.numtheory import coprime_residues
from core.omega import omega_product
from formulas.builtin import builtin_formula, builtin_names
from formulas.ir import (
    D,
    N,
    ONE,
    PI,
    ZERO,
    ALL_K,
    ODD_K,
    BesselKernel,
    FormulaCase,
    IntLit,
    KRestriction,
    RademacherFormula,
    Sqrt,
    const,
    eval_expr,
    from_json,
    linear,
    sqrt,
    surd,
    to_json,
    to_latex,
)
from utils.errors import DomainError, FormulaEvaluationError, FormulaParseError, RegistryLookupError


CONCRETE_BUILTINS = [name for name in builtin_names() if not name.endswith("<j>")] + [
    "hagis_regular_4",
    "hagis_regular_9",
]


class TestExpressions:
    """Test expression evaluation."""

    def test_hagis_prefactor(self):
        """pi / sqrt(24n + 1) at n = 100 is pi/49."""
        value = eval_expr(PI / sqrt(linear(24, 1)), {"n": 100}, precision=50)
        with mpmath.workdps(50):
            assert abs(value - mpmath.pi / 49) < mpmath.mpf(10) ** -45
        assert abs(float(value) - 0.0641141357) < 1e-10

    def test_integer_literal(self):
        """Literals evaluate to themselves."""
        assert eval_expr(IntLit(value=7), {}) == 7

    def test_vanishing_weight(self):
        """sqrt((d-2)(7d-13)) vanishes at d = 2."""
        weight = sqrt((D - 2) * (7 * D - 13))
        assert eval_expr(weight, {"d": 2}) == 0
        assert eval_expr(weight, {"d": 4}) == eval_expr(surd(30), {})

    def test_exact_arithmetic(self):
        """Rational subtrees stay exact."""
        expr = (N + Fraction(1, 3)) / 7
        assert expr.exact({"n": 2}) == Fraction(1, 3)
        assert sqrt(Fraction(9, 4)).exact({}) == Fraction(3, 2)
        assert sqrt(2).exact({}) is None

    def test_unbound_variable(self):
        """A free variable without a value is an evaluation error."""
        with pytest.raises(FormulaEvaluationError):
            eval_expr(N + 1, {})

    def test_negative_radicand(self):
        """The square root of a negative number is a domain error."""
        with pytest.raises(DomainError):
            eval_expr(sqrt(N - 5), {"n": 1})

    def test_precision_doubling(self):
        """Values at 30 and 60 digits agree to 30 digits."""
        expr = PI * sqrt(linear(24, -1)) / (6 * sqrt(2))
        low = eval_expr(expr, {"n": 17}, precision=30)
        high = eval_expr(expr, {"n": 17}, precision=60)
        with mpmath.workdps(60):
            assert abs(low - high) < mpmath.mpf(10) ** -28 * abs(high)

    def test_variables(self):
        """Free variables of an expression."""
        assert (PI * sqrt(D) / 4 + N).variables() == {"d", "n"}
        assert PI.variables() == set()


class TestSurd:
    """Test surd normalization."""

    def test_perfect_squares(self):
        """Perfect squares become literals."""
        assert surd(4) == IntLit(value=2)
        assert surd(Fraction(1, 4)) == const(Fraction(1, 2))
        assert surd(0) == ZERO

    def test_square_part_extracted(self):
        """sqrt(12) = 2 sqrt(3)."""
        assert surd(12) == 2 * Sqrt(arg=IntLit(value=3))

    def test_rational_radicand(self):
        """sqrt(2/3) = sqrt(6)/3 numerically."""
        with mpmath.workdps(40):
            assert abs(eval_expr(surd(Fraction(2, 3)), {}) - mpmath.sqrt(mpmath.mpf(2) / 3)) < mpmath.mpf(10) ** -38

    def test_negative(self):
        """Negative radicands are rejected."""
        with pytest.raises(DomainError):
            surd(-1)


class TestDerivative:
    """Test symbolic differentiation in n."""

    def test_linear(self):
        """d/dn (24n - 1) = 24."""
        assert eval_expr(linear(24, -1).diff("n"), {"n": 3}) == 24

    def test_square_root(self):
        """d/dn sqrt(n) = 1/(2 sqrt(n))."""
        assert sqrt(N).diff("n").exact({"n": 4}) == Fraction(1, 4)

    def test_power_and_product(self):
        """d/dn n^3 = 3n^2 and d/dn (pi n) = pi."""
        assert (N ** 3).diff("n").exact({"n": 2}) == 12
        with mpmath.workdps(30):
            assert abs(eval_expr((PI * N).diff("n"), {"n": 5}) - mpmath.pi) < mpmath.mpf(10) ** -28

    def test_quotient(self):
        """d/dn (1/n) = -1/n^2."""
        assert (1 / N).diff("n").exact({"n": 3}) == Fraction(-1, 9)

    def test_constant(self):
        """Constants differentiate to zero."""
        assert eval_expr(PI.diff("n"), {}) == 0
        assert eval_expr(D.diff("n"), {"d": 3}) == 0


class TestKernelsAndCases:
    """Test kernel, restriction and case validation."""

    def test_restrictions(self):
        """gcd and congruence restrictions."""
        gcd_two = KRestriction(kind="gcd", modulus=12, value=2)
        assert [k for k in range(1, 25) if gcd_two.admits(k)] == [2, 10, 14, 22]
        two_mod_four = KRestriction(kind="congruence", modulus=4, value=2)
        assert [k for k in range(1, 12) if two_mod_four.admits(k)] == [2, 6, 10]
        assert all(ALL_K.admits(k) for k in range(1, 10))
        assert [k for k in range(1, 8) if ODD_K.admits(k)] == [1, 3, 5, 7]

    def test_sinh_kernel_needs_three_halves(self):
        """The sinh form only exists for order 3/2."""
        with pytest.raises(ValidationError):
            BesselKernel(kind="sinh_derivative", order=1, coefficient=PI, radicand=N)

    def test_order_must_be_half_integral(self):
        """Orders below 1 or off the half-integers are rejected."""
        with pytest.raises(ValidationError):
            BesselKernel(kind="bessel_i", order=Fraction(1, 3), coefficient=PI, radicand=N)
        with pytest.raises(ValidationError):
            BesselKernel(kind="bessel_i", order=Fraction(1, 2), coefficient=PI, radicand=N)

    def test_kernel_constants_free_of_k(self):
        """Kernel constants may not mention k."""
        from formulas.ir import K
        with pytest.raises(ValidationError):
            BesselKernel(kind="bessel_i", order=1, coefficient=PI * K, radicand=N)

    def test_weight_free_of_n(self, hagis):
        """Case weights depend on d only."""
        case = hagis.cases[0]
        with pytest.raises(ValidationError):
            FormulaCase(
                d=1, restriction=ALL_K, weight=N, omega_desc=case.omega_desc,
                kernel=case.kernel, k_power=-1,
            )

    def test_formula_needs_a_case(self, hagis):
        """A formula without cases is rejected."""
        with pytest.raises(ValidationError):
            RademacherFormula(name="empty", prefactor=ONE, cases=(), oracle=hagis.oracle)


class TestBuiltins:
    """Test the transcribed formulas."""

    def test_rademacher_shape(self, rademacher):
        """p(n): one sinh case over all k with radicand n - 1/24."""
        (case,) = rademacher.cases
        assert case.kernel.kind == "sinh_derivative"
        assert case.kernel.order == Fraction(3, 2)
        assert case.k_power == Fraction(1, 2)
        assert case.kernel.radicand.exact({"n": 1}) == Fraction(23, 24)

    def test_hagis_shape(self, hagis):
        """delta(n): one I_1 case over odd k."""
        (case,) = hagis.cases
        assert case.restriction.admits(3) and not case.restriction.admits(4)
        assert case.kernel.order == 1
        with mpmath.workdps(30):
            expected = mpmath.pi / (6 * mpmath.sqrt(2))
            assert abs(eval_expr(case.kernel.coefficient, {}) - expected) < mpmath.mpf(10) ** -28

    def test_s107_weights(self):
        """Cases j = 1, 2 carry sqrt(4j - 3)."""
        formula = builtin_formula("s107")
        assert [case.d for case in formula.cases] == [1, 2]
        assert eval_expr(formula.cases[0].weight, {"d": 1}) == 1
        with mpmath.workdps(30):
            assert abs(eval_expr(formula.cases[1].weight, {"d": 2}) - mpmath.sqrt(5)) < mpmath.mpf(10) ** -28

    def test_regular_family(self):
        """Cases of the j-regular formula are the d | j with d^2 < j."""
        assert [case.d for case in builtin_formula("hagis_regular_12").cases] == [1, 2, 3]
        assert [case.d for case in builtin_formula("hagis_regular_9").cases] == [1]
        assert builtin_formula("hagis_regular", j=4) == builtin_formula("hagis_regular_4")

    def test_regular_needs_j(self):
        """The family without j is a domain error."""
        with pytest.raises(DomainError):
            builtin_formula("hagis_regular")

    def test_unknown_builtin(self):
        """Unknown names raise a lookup error."""
        with pytest.raises(RegistryLookupError):
            builtin_formula("hagis_indistinct")

    @pytest.mark.parametrize("name", CONCRETE_BUILTINS)
    def test_multiplier_arguments_are_valid(self, name):
        """Every admitted k <= 30 yields valid multiplier arguments."""
        formula = builtin_formula(name)
        for case in formula.cases:
            for k in range(1, 31):
                if case.restriction.admits(k):
                    for h in coprime_residues(k):
                        omega_product(case.omega_desc, h, k)

    @pytest.mark.parametrize("name", CONCRETE_BUILTINS)
    def test_prefactor_depends_on_n_only(self, name):
        """Prefactors mention no k or d."""
        assert builtin_formula(name).prefactor.variables() <= {"n"}


class TestSerialization:
    """Test JSON and LaTeX output."""

    @pytest.mark.parametrize("name", CONCRETE_BUILTINS)
    def test_json_round_trip(self, name):
        """Decoding the encoding gives the same formula."""
        formula = builtin_formula(name)
        assert from_json(to_json(formula)) == formula

    def test_rationals_as_strings(self, rademacher):
        """Exact rationals are encoded as strings."""
        data = json.loads(to_json(rademacher))
        assert data["cases"][0]["k_power"] == "1/2"
        assert data["cases"][0]["kernel"]["order"] == "3/2"

    def test_syntax_error_position(self):
        """Malformed JSON reports line and column."""
        with pytest.raises(FormulaParseError) as excinfo:
            from_json('{"name": "x",')
        assert excinfo.value.line == 1
        assert excinfo.value.column is not None

    def test_top_level_must_be_object(self):
        """A JSON list is not a formula."""
        with pytest.raises(FormulaParseError):
            from_json("[1, 2]")

    def test_missing_field_path(self):
        """Schema errors name the failing field."""
        with pytest.raises(FormulaParseError) as excinfo:
            from_json('{"name": "x"}')
        assert excinfo.value.path == "prefactor"

    def test_nested_error_path(self, hagis):
        """Errors deep in the tree carry a dotted path."""
        data = json.loads(to_json(hagis))
        data["cases"][0]["kernel"]["order"] = "1/3"
        with pytest.raises(FormulaParseError) as excinfo:
            from_json(json.dumps(data))
        assert excinfo.value.path.startswith("cases[0].kernel")

    def test_latex_bessel(self, hagis):
        """The distinct-parts formula prints I_1 inside an equation block."""
        text = to_latex(hagis)
        assert r"\begin{equation}" in text
        assert "I_1" in text
        assert r"2 \nmid k" in text

    def test_latex_sinh(self, rademacher):
        """Rademacher's formula prints the sinh derivative."""
        text = to_latex(rademacher)
        assert r"\sinh" in text
        assert r"\frac{d}{dn}" in text

    def test_latex_weight_comment(self):
        """Printed weight closed forms follow the equation."""
        text = to_latex(builtin_formula("niven"))
        assert text.endswith(r"% case weights: \sqrt{(d-2)(d-3)}")


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
