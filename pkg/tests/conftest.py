import time
from pathlib import Path

import pytest

from wdcop import harness

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "scenarios" / "fixtures.json"

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def fixtures_path():
    return FIXTURES


@pytest.fixture(scope="session")
def fixture_run():
    """(scenarios, results, elapsed seconds) for the bundled scenario suite."""
    scenarios = harness.load_scenarios(FIXTURES)
    t0 = time.perf_counter()
    results = harness.run_all(scenarios)
    return scenarios, results, time.perf_counter() - t0


@pytest.fixture(scope="session")
def results_by_name(fixture_run):
    return {r.scenario.name: r for r in fixture_run[1]}


@pytest.fixture(scope="session")
def lemma_items():
    return harness.verify_lemmas()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
