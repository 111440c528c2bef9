import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

EXPERIMENTS = ("exp1", "exp2", "exp3", "exp4", "exp5")


@pytest.fixture(scope="session")
def analyses():
    """Default-pipeline analysis of every synthetic experiment, computed once."""
    from autovmd.pipeline import analyze
    from autovmd.spectrum import gen_signal
    return {name: analyze(gen_signal(name)) for name in EXPERIMENTS}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
