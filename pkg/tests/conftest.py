import mpmath
import pytest


def mp_tail(q: float, n: int, dps: int = 40) -> float:
    """High-precision ``sum_{k>=n} 1/rho_q(k)``, independent of the library."""
    with mpmath.workdps(dps):
        Q = mpmath.mpf(q)
        val = mpmath.nsum(lambda k: Q**k * (1 - Q**2) / mpmath.sqrt(1 - Q ** (2 * (k + 1))), [n, mpmath.inf])
        return float(val)


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20241015)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one PASS/FAIL line; all lines are repeated in the terminal summary."""

    def _report(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
