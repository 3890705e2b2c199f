import numpy as np
import pytest

from recordchar import DistributionSpec

ALL_SPECS = [
    DistributionSpec.exponential(1.0, 0.0),
    DistributionSpec.exponential(2.0, 1.0),
    DistributionSpec.exponential(0.5, -1.0),
    DistributionSpec.weibull(2.0, 1.0),
    DistributionSpec.weibull(0.7, 2.0),
    DistributionSpec.pareto(2.0, 1.0),
    DistributionSpec.uniform(0.0, 1.0),
    DistributionSpec.uniform(2.0, 4.0),
]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=ALL_SPECS, ids=str)
def spec(request):
    return request.param


_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, passed, text)``."""
    def report(number: int, passed: bool, text: str) -> str:
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {text}"
        _CRITERIA.append(line)
        print(line)
        return line
    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
