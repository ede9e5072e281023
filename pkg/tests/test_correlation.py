import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fewphoton.boundstate import f_tau
from fewphoton.correlation import approach_rate, g2_asymptote, g2_curve, g2_resonant
from fewphoton.errors import DomainError, InvalidArgumentError
from fewphoton.model import SystemParams


def test_contact_value_at_ep(fig3_critical):
    assert g2_resonant(fig3_critical, 0.0) == pytest.approx((11 / (5 * math.pi)) ** 2, rel=1e-14)
    assert g2_resonant(fig3_critical, 0.0) == pytest.approx(0.49040, abs=1e-5)


@settings(max_examples=50, deadline=None)
@given(g=st.floats(0.01, 2), ratio=st.floats(0.1, 20))
def test_asymptote_is_plane_wave_weight(g, ratio):
    p = SystemParams.resonant(1.0, g, ratio * g)
    assert g2_asymptote(p) == pytest.approx(1 / math.pi ** 2, rel=1e-15)
    far = 60 / min(p.kappa / 4, g) if ratio < 4 else 60 / (p.kappa / 4 - math.sqrt(max(p.kappa ** 2 / 16 - g * g, 0)))
    assert g2_resonant(p, far) == pytest.approx(1 / math.pi ** 2, rel=1e-9)


@settings(max_examples=50, deadline=None)
@given(g=st.floats(0.01, 2), ratio=st.floats(0.1, 20), tau=st.floats(0, 100))
def test_matches_definition(g, ratio, tau):
    p = SystemParams.resonant(1.3, g, ratio * g)
    k2 = p.kappa ** 2
    expected = abs(np.exp(1.3j * tau) / math.pi - 4 * k2 / (math.pi * (k2 + 4 * g * g)) * f_tau(p, tau)) ** 2
    assert g2_resonant(p, tau) == pytest.approx(expected, rel=1e-12, abs=1e-300)
    assert g2_resonant(p, tau) >= 0
    assert g2_resonant(p, -tau) == g2_resonant(p, tau)


@pytest.mark.parametrize("omega", [1.0, 3.0])
@pytest.mark.parametrize("ratio,rate", [(2.0, 0.5), (4.0, 1.0), (8.0, 2 - math.sqrt(3))])
def test_approach_rate_follows_slowest_pole(ratio, rate, omega):
    p = SystemParams.resonant(omega, 1.0, ratio)
    tau_max = 12 / min(ratio / 4, 1.0)
    curve = g2_curve(p, tau_max)
    assert curve.approach_rate == pytest.approx(rate, rel=1e-4)
    assert curve.metadata()["asymptote"] == pytest.approx(1 / math.pi ** 2)


def test_peak_envelope_method():
    p = SystemParams.resonant(10.0, 1.0, 2.0)
    curve = g2_curve(p, 24.0, 8192, method="peaks")
    assert curve.approach_rate == pytest.approx(0.5, rel=0.1)


def test_errors():
    p = SystemParams.resonant(1.0, 0.1, 0.4)
    with pytest.raises(InvalidArgumentError):
        g2_curve(p, 10.0, 10)
    with pytest.raises(InvalidArgumentError):
        g2_curve(p, 0.0)
    with pytest.raises(InvalidArgumentError):
        approach_rate(np.linspace(0, 1, 100), np.ones(100), 1.0, method="nope")
    with pytest.raises(DomainError):
        g2_resonant(SystemParams(1.0, 1.1, 0.1, 0.4), 1.0)
