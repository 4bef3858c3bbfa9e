import mpmath
import pytest

from mzvsum.hpcore import PrecisionContext


@pytest.fixture
def ctx():
    return PrecisionContext(30)


@pytest.fixture
def ctx40():
    return PrecisionContext(40)


@pytest.fixture(autouse=True)
def _reset_mpmath_precision():
    # every test starts from mpmath's default so leaked precision cannot mask bugs
    mpmath.mp.dps = 15
    yield
    mpmath.mp.dps = 15


def close(a, b, tol):
    """|a - b| <= tol, evaluated at 60 digits."""
    with mpmath.workdps(60):
        return abs(mpmath.mpmathify(a) - mpmath.mpmathify(b)) <= tol


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one summary line per acceptance criterion (shown at the end of the run)."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number, ok, detail):
        lines[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[number])

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
