"""
Verification harness and command line.
"""

from .table import ReferenceTable, TableReport, load_reference_table, reproduce_table
from .verification import VerificationReport, oracle_coefficients, verify_formula

__all__ = [
    "ReferenceTable",
    "TableReport",
    "load_reference_table",
    "reproduce_table",
    "VerificationReport",
    "oracle_coefficients",
    "verify_formula",
]
