import pytest
from gmpy2 import mpq

from pseudopower.precision import EXACT, MACHINE, big

# filled by test_acceptance.py, printed at the end of the session
ACCEPTANCE_RESULTS = {}


@pytest.fixture(scope="session")
def acceptance_results():
    return ACCEPTANCE_RESULTS


@pytest.fixture(params=["exact", "big", "machine"])
def any_precision(request):
    return {"exact": EXACT, "big": big(256), "machine": MACHINE}[request.param]


@pytest.fixture
def q():
    return mpq


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: (int(k.split(".")[0]), k)):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {key}: {detail}")
