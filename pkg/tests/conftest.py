from fractions import Fraction

import pytest
from hypothesis import strategies as st

from rnagrowth.series import PowerSeries

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


def series_of(order: int):
    return st.lists(rationals, min_size=order + 1, max_size=order + 1).map(PowerSeries)


@pytest.fixture
def lambda2_counts():
    # oracle-verified counts for arc length >= 2, n = 0..7
    return [1, 1, 1, 2, 4, 8, 17, 37]


def brute_square(a):
    """Cauchy square by explicit double loop over Fractions."""
    n = len(a)
    return [sum(Fraction(a[i]) * a[k - i] for i in range(k + 1)) for k in range(n)]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
