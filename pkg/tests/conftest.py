import json
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

# Filled by tests/test_acceptance.py; printed once at the end of the run.
CRITERIA: dict = {}


@pytest.fixture(scope="session")
def oracle_data():
    return json.loads((DATA / "oracles.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(CRITERIA):
        ok, detail = CRITERIA[key]
        terminalreporter.write_line(f"CRITERION {key}: {'PASS' if ok else 'FAIL'} - {detail}")
