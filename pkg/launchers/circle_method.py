#!/usr/bin/env python3
"""
Circle-method command line launcher
===================================

Puts ``src/`` on the import path and runs the command group, e.g.

    python launchers/circle_method.py expand --name p --order 5
    python launchers/circle_method.py table --format csv
"""

import sys
from pathlib import Path

# Add src to path for imports
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / "src"))

from dotenv import load_dotenv

load_dotenv(project_root / ".env")

from harness.cli import cli_main


if __name__ == "__main__":
    sys.exit(cli_main(sys.argv[1:]))
