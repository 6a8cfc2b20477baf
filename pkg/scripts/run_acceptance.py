"""Run the acceptance criteria and print one PASS/FAIL line each.

    python3 scripts/run_acceptance.py
"""

import runpy
import sys
from pathlib import Path

if __name__ == "__main__":
    tests = Path(__file__).resolve().parent.parent / "tests" / "test_acceptance.py"
    sys.argv = [str(tests)]
    runpy.run_path(str(tests), run_name="__main__")
