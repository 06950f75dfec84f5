"""
Reproduction of the numerical test table.

Every transcribed formula of the table is verified on 1..n_hi with k <= K;
the rows list the exact value at n_hi and the largest absolute error. The
reference values live in ``config/reference_table.yaml``: a value mismatch
fails the table, a max-error deviation beyond the soft tolerance only
produces a warning.
"""

import csv
import io
from pathlib import Path
from typing import List, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field

from formulas.builtin import builtin_formula
from utils.config import get_settings, resolve_project_path
from utils.logging import PerformanceTimer, get_logger
from .verification import verify_formula


logger = get_logger(__name__)

CSV_COLUMNS = ["name", "n_max", "oracle_value", "formula_value", "max_abs_error", "pass"]


class ReferenceRow(BaseModel):
    formula: str
    function: str
    value: int
    max_error: float


class ReferenceTable(BaseModel):
    """Published values the reproduction is compared with."""
    n: int = 100
    K: int = 10
    rows: List[ReferenceRow]


class TableRow(BaseModel):
    formula: str
    function: str
    n_max: int
    oracle_value: int
    formula_value: str
    max_abs_error: float
    all_round_correct: bool
    reference_value: Optional[int] = None
    reference_max_error: Optional[float] = None
    passed: bool = Field(..., alias="pass")

    model_config = ConfigDict(populate_by_name=True)


class TableReport(BaseModel):
    K: int
    n_hi: int
    digits: int
    rows: List[TableRow]
    warnings: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def to_markdown(self) -> str:
        lines = [
            f"| Formula | Function | Value at n={self.n_hi} | Max error |",
            "|---|---|---:|---:|",
        ]
        for row in self.rows:
            lines.append(
                f"| {row.formula} | {row.function} | {row.oracle_value} | {row.max_abs_error:.3f} |"
            )
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in self.rows:
            writer.writerow([
                row.formula,
                row.n_max,
                row.oracle_value,
                row.formula_value,
                f"{row.max_abs_error:.6f}",
                "true" if row.passed else "false",
            ])
        return buffer.getvalue()

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, by_alias=True)


def load_reference_table(path: Optional[str] = None) -> ReferenceTable:
    """
    Load the reference table.

    Args:
        path: YAML file; the configured ``harness.reference_table`` when omitted

    Returns:
        ReferenceTable
    """
    path = resolve_project_path(path or get_settings().harness.reference_table)
    with open(Path(path), "r") as handle:
        data = yaml.safe_load(handle) or {}
    return ReferenceTable(**data)


def reproduce_table(
    K: Optional[int] = None,
    n_hi: Optional[int] = None,
    digits: Optional[int] = None,
    reference: Optional[ReferenceTable] = None,
    cache_dir: Optional[str] = None,
) -> TableReport:
    """
    Verify every formula of the reference table.

    Args:
        K: Truncation (configured default when omitted)
        n_hi: Top of the range 1..n_hi
        digits: Significant digits
        reference: Reference values; loaded from the configured file when omitted
        cache_dir: Optional oracle cache directory

    Returns:
        TableReport; ``passed`` is False when any row's value mismatches
    """
    settings = get_settings()
    K = K or settings.harness.truncation
    n_hi = n_hi or settings.harness.n_hi
    digits = digits or settings.precision.digits
    reference = reference or load_reference_table()
    comparable = reference.n == n_hi and reference.K == K
    tolerance = settings.harness.soft_tolerance

    rows, warnings = [], []
    with PerformanceTimer("reproduce table", logger, K=K, n_hi=n_hi, rows=len(reference.rows)):
        for ref in reference.rows:
            report = verify_formula(builtin_formula(ref.formula), 1, n_hi, K, digits, cache_dir=cache_dir)

            value_ok = report.rounded_value == report.value_at_nmax
            if comparable and report.value_at_nmax != ref.value:
                value_ok = False
                warnings.append(f"{ref.formula}: value {report.value_at_nmax} differs from reference {ref.value}")
            if comparable and abs(report.max_abs_error - ref.max_error) > tolerance:
                warnings.append(
                    f"{ref.formula}: max error {report.max_abs_error:.3f} "
                    f"differs from reference {ref.max_error:.3f} by more than {tolerance}"
                )

            rows.append(TableRow(
                formula=ref.formula,
                function=ref.function,
                n_max=n_hi,
                oracle_value=report.value_at_nmax,
                formula_value=report.formula_value,
                max_abs_error=report.max_abs_error,
                all_round_correct=report.all_round_correct,
                reference_value=ref.value if comparable else None,
                reference_max_error=ref.max_error if comparable else None,
                passed=value_ok and report.all_round_correct,
            ))

    for message in warnings:
        logger.warning("table soft check", detail=message)
    return TableReport(K=K, n_hi=n_hi, digits=digits, rows=rows, warnings=warnings)
