import numpy as np
import pytest

from lempert_lab.conformal import build_riemann_map, example4_domain
from lempert_lab.domain import BallDomain, ellipse, smoothed_rectangle, unit_disc


@pytest.fixture(scope="session")
def disc_domain():
    return unit_disc()


@pytest.fixture(scope="session")
def ellipse_domain():
    return ellipse(2, 1)


@pytest.fixture(scope="session")
def rectangle_domain():
    return smoothed_rectangle()


@pytest.fixture(scope="session")
def ball2():
    return BallDomain(2)


@pytest.fixture(scope="session")
def ellipse_map(ellipse_domain):
    return build_riemann_map(ellipse_domain, 0j)


@pytest.fixture(scope="session")
def rectangle_map(rectangle_domain):
    return build_riemann_map(rectangle_domain, 0j)


@pytest.fixture(scope="session")
def example4_pair():
    return example4_domain()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = []


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, passed, detail)``; printed as one line per criterion at the end of the run."""

    def record(number, title, passed, detail):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {title}: {detail}"
        _ACCEPTANCE.append((number, line))
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_ACCEPTANCE):
            terminalreporter.write_line(line)
