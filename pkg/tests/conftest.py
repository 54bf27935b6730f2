import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "dringkit", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "dringkit"))

CORPUS = os.path.join(os.path.dirname(__file__), "..", "src", "dringkit", "corpus")


@pytest.fixture
def corpus_dir():
    return os.path.abspath(CORPUS)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
