import math

import pytest
from hypothesis import strategies as st

from fewphoton.model import SystemParams


@st.composite
def generic_params(draw, min_g=0.05, max_g=2.0):
    """Parameters kept away from the exceptional points."""
    Omega = draw(st.floats(0.5, 2.0))
    omega = Omega + draw(st.floats(-0.5, 0.5))
    g = draw(st.floats(min_g, max_g))
    kappa = draw(st.floats(0.01, 3.0))
    if abs(omega - Omega) < 1e-3:
        # resonant draws: keep clear of κ = 4√n g for n = 1, 2
        for n in (1, 2):
            if abs(kappa - 4 * math.sqrt(n) * g) < 0.02 * g:
                kappa += 0.1 * g
    return SystemParams(omega, Omega, g, kappa)


@pytest.fixture
def fig3_critical():
    return SystemParams.resonant(1.0, 0.1, 0.4)


def pytest_terminal_summary(terminalreporter):
    import test_acceptance
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(test_acceptance.RESULTS):
            terminalreporter.write_line(test_acceptance.RESULTS[number])
