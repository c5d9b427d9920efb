import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def probabilities(max_den: int = 60):
    return st.builds(lambda n, d: Fraction(min(n, d), d),
                     st.integers(0, max_den), st.integers(1, max_den))


def interior_probabilities(max_den: int = 60):
    return st.builds(lambda n, d: Fraction(n, d + n + 1) if n else Fraction(1, d + 2),
                     st.integers(1, max_den), st.integers(0, max_den))


@pytest.fixture
def half():
    return Fraction(1, 2)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
