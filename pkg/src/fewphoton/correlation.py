"""Second-order correlation of the scattered two-photon state.

For resonant scattering (``k1 = k2 = ω = Ω``)

    G2(τ) = | e^{iωτ}/π - 4κ²/(π(κ² + 4g²)) f(τ) |²

where the first term is the non-interacting (plane wave) part and the second
the bound state. Since ``f → 0`` the curve tends to ``1/π²``, the squared
weight of the plane-wave part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .boundstate import _require_resonant, f_tau
from .errors import InsufficientDataError, InvalidArgumentError
from .model import SystemParams
from .numerics import fit_exp_rate, slowest_decay_rate


def _coefficients(params: SystemParams):
    free = 1.0 / math.pi
    k2 = params.kappa ** 2
    bound = 4.0 * k2 / (math.pi * (k2 + 4.0 * params.g ** 2))
    return free, bound


def g2_resonant(params: SystemParams, tau):
    _require_resonant(params, "g2_resonant")
    free, bound = _coefficients(params)
    t = np.asarray(tau, dtype=float)
    val = np.abs(free * np.exp(1j * params.omega * t) - bound * f_tau(params, t)) ** 2
    return val[()] if val.ndim == 0 else val


def g2_asymptote(params: SystemParams) -> float:
    """Large-separation limit: squared modulus of the plane-wave coefficient."""
    free, _ = _coefficients(params)
    return free * free


@dataclass(frozen=True)
class CorrelationCurve:
    tau_grid: np.ndarray
    g2: np.ndarray
    asymptote: float
    approach_rate: float
    params: Optional[SystemParams] = None
    method: str = "modes"

    def metadata(self) -> dict:
        meta = {"asymptote": self.asymptote, "approach_rate": self.approach_rate,
                "approach_method": self.method, "points": int(self.tau_grid.size)}
        if self.params is not None:
            meta["params"] = self.params.as_dict()
        return meta


#: damped modes in G2 - asymptote: four from the cross term e^{∓iωτ} f, three from f²
G2_MODES = 7


def approach_rate(tau, g2, asymptote, method="modes", n_modes=G2_MODES) -> float:
    """Exponential rate at which ``g2`` settles onto ``asymptote``.

    Uses the samples with ``τ >= τ_max / 3``. ``"modes"`` fits the deviation
    ``g2 - asymptote`` with ``n_modes`` damped exponentials and returns the
    slowest significant rate (``n_modes=None`` picks the order from the data
    rank, which undercounts when mode frequencies nearly coincide);
    ``"peaks"`` fits a line to the log of the local maxima of
    ``|g2 - asymptote|``.
    """
    tau = np.asarray(tau, dtype=float)
    dev = np.asarray(g2, dtype=float) - asymptote
    sel = tau >= tau[-1] / 3.0
    t, d = tau[sel], dev[sel]
    if method == "modes":
        return slowest_decay_rate(t, d, n_modes=n_modes)
    if method == "peaks":
        mag = np.abs(d)
        inner = (mag[1:-1] >= mag[:-2]) & (mag[1:-1] > mag[2:])
        idx = np.nonzero(inner)[0] + 1
        idx = idx[mag[idx] > 0]
        if idx.size < 8:
            raise InsufficientDataError("fewer than 8 envelope peaks in the fit window")
        return fit_exp_rate(t[idx], mag[idx])[0]
    raise InvalidArgumentError(f"unknown method {method!r}")


def g2_curve(params: SystemParams, tau_max: float, n_points: int = 2048,
             method: str = "modes") -> CorrelationCurve:
    if not tau_max > 0:
        raise InvalidArgumentError("tau_max must be positive")
    if n_points < 64:
        raise InvalidArgumentError("n_points must be at least 64")
    tau = np.linspace(0.0, tau_max, int(n_points))
    g2 = g2_resonant(params, tau)
    asym = g2_asymptote(params)
    rate = approach_rate(tau, g2, asym, method)
    return CorrelationCurve(tau, g2, asym, rate, params, method)
