"""
Tests for the verification harness and the reproduction of the test table.
"""

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest
from structlog.testing import capture_logs

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from core.qseries import expand_eta_quotient
from core.registry import registry_lookup
from formulas.builtin import builtin_formula
from formulas.ir import ONE, PI, BesselKernel, FormulaCase, RademacherFormula, linear
from harness.table import (
    CSV_COLUMNS,
    ReferenceRow,
    ReferenceTable,
    load_reference_table,
    reproduce_table,
)
from harness.verification import VerificationReport, fixed_point, oracle_coefficients, verify_formula
from utils.errors import DomainError, VerificationError


@pytest.fixture
def small_reference():
    """Reference values at n = 20, K = 10."""
    return ReferenceTable(n=20, K=10, rows=[
        ReferenceRow(formula="hagis_distinct", function="δ(n)", value=64, max_error=0.2),
        ReferenceRow(formula="rademacher_p", function="p(n)", value=627, max_error=0.2),
    ])


class TestOracle:
    """Test exact coefficient oracles."""

    def test_in_memory(self, distinct_spec):
        """Coefficients come from the exact expansion."""
        assert oracle_coefficients(distinct_spec, 10) == (1, 1, 1, 2, 2, 3, 4, 5, 6, 8, 10)

    def test_csv_cache(self, distinct_spec, tmp_path):
        """The CSV cache is written once and read back."""
        first = oracle_coefficients(distinct_spec, 30, cache_dir=str(tmp_path))
        files = list(tmp_path.glob("eta_*.csv"))
        assert [f.name for f in files] == ["eta_1x1_2x-1.csv"]
        with open(files[0], newline="") as handle:
            rows = list(csv.DictReader(handle))
        assert len(rows) == 31
        assert int(rows[30]["coefficient"]) == first[30]
        assert oracle_coefficients(distinct_spec, 20, cache_dir=str(tmp_path)) == first[:21]


class TestVerifyFormula:
    """Test formula verification."""

    def test_single_point(self, rademacher):
        """verify on 1..1 checks p(1) = 1."""
        report = verify_formula(rademacher, 1, 1, 10)
        assert report.value_at_nmax == 1
        assert report.max_abs_error < 0.5
        assert report.all_round_correct
        assert report.passed

    def test_partitions_small_range(self, rademacher):
        """Rademacher's formula rounds correctly on 1..60."""
        report = verify_formula(rademacher, 1, 60, 10)
        assert report.all_round_correct
        assert report.value_at_nmax == 966467
        assert report.max_imag_residual < 1e-20

    @pytest.mark.slow
    def test_distinct_parts_table_row(self, hagis):
        """delta on 1..100 matches the published row."""
        report = verify_formula(hagis, 1, 100, 10)
        assert report.value_at_nmax == 444793
        assert report.all_round_correct
        assert report.max_abs_error < 0.5

    @pytest.mark.slow
    def test_s76_table_row(self):
        """S_76 on 1..100."""
        report = verify_formula(builtin_formula("s76"), 1, 100, 10)
        assert report.value_at_nmax == 15008235468
        assert report.all_round_correct

    def test_large_values_stay_exact(self, rademacher):
        """Above 2^53 the report carries the exact rounded integer."""
        report = verify_formula(rademacher, 400, 400, 40, digits=40)
        assert report.value_at_nmax > 2 ** 53
        assert report.rounded_value == report.value_at_nmax
        assert report.passed
        assert abs(Fraction(report.formula_value) - report.value_at_nmax) < Fraction(1, 2)

    @pytest.mark.slow
    def test_partitions_to_two_hundred(self, rademacher):
        """Every p(n) with n <= 200 rounds correctly from forty terms."""
        report = verify_formula(rademacher, 1, 200, 40, digits=40)
        assert report.all_round_correct
        assert report.value_at_nmax == 3972999029388
        assert report.max_abs_error < 0.5

    def test_verbose_errors(self, hagis):
        """Verbose reports keep one error per n."""
        report = verify_formula(hagis, 5, 12, 10, verbose=True)
        assert len(report.errors) == 8
        assert max(report.errors) == report.max_abs_error
        assert verify_formula(hagis, 5, 12, 10).errors is None

    def test_wrong_oracle_fails(self, hagis):
        """A formula checked against the wrong coefficients does not pass."""
        wrong = hagis.model_copy(update={"oracle": registry_lookup("p").eta})
        report = verify_formula(wrong, 1, 20, 10)
        assert not report.passed

    def test_bad_range(self, hagis):
        """n_lo must not exceed n_hi."""
        with pytest.raises(DomainError):
            verify_formula(hagis, 10, 5, 10)
        with pytest.raises(DomainError):
            verify_formula(hagis, 0, 5, 10)

    def test_evaluation_failure_is_wrapped(self, hagis):
        """Kernel failures surface as VerificationError with n."""
        broken = RademacherFormula(
            name="broken",
            prefactor=ONE,
            cases=(FormulaCase(
                d=1, restriction=hagis.cases[0].restriction, weight=ONE,
                omega_desc=hagis.cases[0].omega_desc,
                kernel=BesselKernel(kind="bessel_i", order=1, coefficient=PI, radicand=linear(1, -3)),
                k_power=-1,
            ),),
            oracle=hagis.oracle,
        )
        with pytest.raises(VerificationError) as excinfo:
            verify_formula(broken, 1, 5, 10)
        assert excinfo.value.context["n"] == 1

    def test_defaults_from_configuration(self, hagis, monkeypatch):
        """Range and truncation default to the harness configuration."""
        from utils.config import configure

        monkeypatch.setenv("CIRCLE_HARNESS__N_HI", "12")
        configure(environment="testing")
        report = verify_formula(hagis)
        assert (report.n_lo, report.n_hi, report.K) == (1, 12, 10)


class TestFixedPoint:
    """Test decimal rendering of formula values."""

    def test_negative(self):
        """Signs and padding."""
        assert fixed_point(mpmath.mpf("-12.5")) == "-12.500000"
        assert fixed_point(mpmath.mpf("-0.25"), places=2) == "-0.25"

    def test_beyond_double_precision(self):
        """Integers past 2^53 keep every digit."""
        with mpmath.workdps(40):
            value = mpmath.mpf(2) ** 70 + mpmath.mpf("0.25")
        assert fixed_point(value) == "1180591620717411303424.250000"


class TestTable:
    """Test table reproduction."""

    def test_reference_values_match_oracles(self):
        """Every reference value is the exact coefficient of the formula's eta quotient."""
        reference = load_reference_table()
        for row in reference.rows:
            oracle = builtin_formula(row.formula).oracle
            assert expand_eta_quotient(oracle, reference.n)[reference.n] == row.value, row.formula

    def test_large_row_passes(self, monkeypatch):
        """Rows compare the rounded integer, not a float."""
        exact = 26559099518207840594

        def fake_verify(f, n_lo, n_hi, K, digits, cache_dir=None):
            return VerificationReport(
                formula=f.name, n_lo=n_lo, n_hi=n_hi, K=K, digits=digits,
                value_at_nmax=exact, rounded_value=exact,
                formula_value="26559099518207840593.870000",
                max_abs_error=0.13, worst_n=n_hi,
                all_round_correct=True, max_imag_residual=0.0,
            )

        monkeypatch.setattr("harness.table.verify_formula", fake_verify)
        reference = ReferenceTable(n=300, K=30, rows=[
            ReferenceRow(formula="s77", function="S_77(n)", value=exact, max_error=0.13),
        ])
        report = reproduce_table(K=30, n_hi=300, reference=reference)
        assert report.passed
        rows = list(csv.reader(io.StringIO(report.to_csv())))
        assert rows[1][2] == str(exact)
        assert rows[1][3] == "26559099518207840593.870000"

    def test_reference_file(self):
        """The shipped reference table has twelve rows at n = 100, K = 10."""
        reference = load_reference_table()
        assert (reference.n, reference.K) == (100, 10)
        assert len(reference.rows) == 12
        assert reference.rows[0].formula == "hagis_distinct"
        assert reference.rows[0].value == 444793

    def test_small_table(self, small_reference):
        """A small table passes and renders in every format."""
        report = reproduce_table(K=10, n_hi=20, reference=small_reference)
        assert report.passed
        assert [row.oracle_value for row in report.rows] == [64, 627]

        markdown = report.to_markdown()
        assert markdown.splitlines()[0] == "| Formula | Function | Value at n=20 | Max error |"
        assert "| hagis_distinct | δ(n) | 64 |" in markdown

        rows = list(csv.reader(io.StringIO(report.to_csv())))
        assert rows[0] == CSV_COLUMNS
        assert rows[1][0] == "hagis_distinct"
        assert rows[1][-1] == "true"

        data = json.loads(report.to_json())
        assert data["rows"][0]["pass"] is True

    def test_deterministic(self, small_reference):
        """Two runs produce identical output."""
        first = reproduce_table(K=10, n_hi=20, reference=small_reference)
        second = reproduce_table(K=10, n_hi=20, reference=small_reference)
        assert first.to_markdown() == second.to_markdown()
        assert first.to_csv() == second.to_csv()

    def test_value_mismatch_fails(self, small_reference):
        """A wrong reference value fails its row."""
        reference = small_reference.model_copy(update={"rows": [
            ReferenceRow(formula="hagis_distinct", function="δ(n)", value=65, max_error=0.2),
        ]})
        report = reproduce_table(K=10, n_hi=20, reference=reference)
        assert not report.passed
        assert any("differs from reference 65" in w for w in report.warnings)

    def test_soft_check_logged_once(self, small_reference):
        """Each soft-check warning produces a single log event."""
        reference = small_reference.model_copy(update={"rows": [
            ReferenceRow(formula="hagis_distinct", function="δ(n)", value=64, max_error=5.0),
        ]})
        with capture_logs() as events:
            report = reproduce_table(K=10, n_hi=20, reference=reference)
        assert report.passed
        assert len(report.warnings) == 1
        logged = [e for e in events if e["event"] == "table soft check"]
        assert [e["detail"] for e in logged] == report.warnings

    def test_incomparable_reference_is_ignored(self, small_reference):
        """Reference values at another n are not compared."""
        reference = small_reference.model_copy(update={"rows": [
            ReferenceRow(formula="hagis_distinct", function="δ(n)", value=65, max_error=0.2),
        ]})
        report = reproduce_table(K=10, n_hi=15, reference=reference)
        assert report.passed
        assert report.warnings == []
        assert report.rows[0].reference_value is None

    @pytest.mark.slow
    @pytest.mark.integration
    def test_full_table(self):
        """Every published row is reproduced."""
        report = reproduce_table()
        assert report.passed
        assert len(report.rows) == 12
        for row, ref in zip(report.rows, load_reference_table().rows):
            assert row.oracle_value == ref.value
            assert row.max_abs_error < 0.5


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
