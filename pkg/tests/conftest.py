import pytest

from levycumulants.rho_alpha import RhoAlphaNigModel

GAMMA = (85.4175, 64.2544)
DELTA = (0.0248, 0.0335)
BETA = (-8.8886, -13.5988)


def footnote_model(rho12=0.5, a=1.05):
    return RhoAlphaNigModel.bivariate(GAMMA, DELTA, BETA, rho12, a)


@pytest.fixture
def model():
    return footnote_model()


ACCEPTANCE_LINES = []


def record_acceptance(number, name, ok, detail=""):
    ACCEPTANCE_LINES.append(f"criterion {number} {'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
