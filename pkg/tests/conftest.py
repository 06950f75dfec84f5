"""
Shared fixtures for the circle-method test suite.
"""

import os
import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

os.environ.setdefault("CIRCLE_ENVIRONMENT", "testing")

from core.registry import registry_lookup
from formulas.builtin import builtin_formula
from utils.config import configure, reset_settings


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "slow: marks tests as slow running")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


@pytest.fixture(autouse=True)
def testing_settings():
    """Install the testing configuration for every test."""
    reset_settings()
    configure(environment="testing")
    yield
    reset_settings()


@pytest.fixture
def partitions_spec():
    """Eta quotient of p(n)."""
    return registry_lookup("p").eta


@pytest.fixture
def distinct_spec():
    """Eta quotient of partitions into distinct parts."""
    return registry_lookup("delta").eta


@pytest.fixture
def rademacher():
    """Rademacher's formula for p(n)."""
    return builtin_formula("rademacher_p")


@pytest.fixture
def hagis():
    """Formula for partitions into distinct parts."""
    return builtin_formula("hagis_distinct")


@pytest.fixture
def config_file(tmp_path):
    """A small configuration file with a default and a testing section."""
    path = tmp_path / "app.yaml"
    path.write_text(
        "default:\n"
        "  precision:\n"
        "    digits: 40\n"
        "    guard_digits: 8\n"
        "  harness:\n"
        "    n_hi: 30\n"
        "testing:\n"
        "  precision:\n"
        "    digits: 60\n"
        "  omega:\n"
        "    debug_checks: true\n"
    )
    return str(path)
