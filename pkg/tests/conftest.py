import pytest
from hypothesis import HealthCheck, settings

from singcurve.curves import load_curve

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

CUSP = "x^2-y^3"
EX2 = "x^2-y^5"
EX3 = "x^3-y^5"
EX4_SECOND = "x^2-y^3-y^4"
EX4 = "(x^2-y^3)*(x^2-y^3-y^4)"


def curve(text, truncation=32):
    return load_curve({"polynomial": text, "truncation": truncation})


@pytest.fixture
def cusp():
    return curve(CUSP)


ACCEPTANCE_LINES = []


def report(criterion, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
